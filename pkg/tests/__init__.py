# This file is needed to make the directory a package.
