# Makes bochnerkit.suites a package