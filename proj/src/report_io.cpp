// report into JSON/CSV; filled in later
