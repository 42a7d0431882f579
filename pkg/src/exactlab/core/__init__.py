# Core verification modules
