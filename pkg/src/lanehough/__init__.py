"""Lane detection by Sobel edges, binarization and a parallel Hough transform."""

__version__ = "0.1.0"
