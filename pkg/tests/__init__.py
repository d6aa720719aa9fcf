# Tests package for the series-parallel coloring tool
