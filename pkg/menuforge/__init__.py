"""menuforge - asymptotic menus of learning algorithms in bimatrix games"""

__version__ = "0.1.0"
