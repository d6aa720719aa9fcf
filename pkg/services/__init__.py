# Services package for the series-parallel coloring tool
