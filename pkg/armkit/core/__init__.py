# Core business logic module
