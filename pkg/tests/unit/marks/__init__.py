"""Unit tests for mark bookkeeping and sampling."""
