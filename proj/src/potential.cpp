// placeholder, filled in during the build-out
