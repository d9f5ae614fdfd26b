# Program library module
