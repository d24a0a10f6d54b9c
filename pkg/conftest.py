# the examples/ corpus is reference material, not part of the test suite
collect_ignore = ["examples"]
