// verification suites; filled in later
