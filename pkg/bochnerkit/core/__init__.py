# Makes bochnerkit.core a package