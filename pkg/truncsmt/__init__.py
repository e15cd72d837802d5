# This file makes 'truncsmt' a Python package
