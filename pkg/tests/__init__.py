# Tests package for ngdef
