# Tests for seriate
