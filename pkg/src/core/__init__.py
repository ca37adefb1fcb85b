# Core module: settings, exceptions, logging, and the ordered process pool
