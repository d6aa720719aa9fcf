# Controllers package for the series-parallel coloring tool
