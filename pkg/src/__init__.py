# Shifted Waring Lab: certified search for shifted Waring witnesses
