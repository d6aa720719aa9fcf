# Series-Parallel Coloring
# Oriented chromatic numbers and indices of series-parallel digraphs
