# Makes bochnerkit.cli a package