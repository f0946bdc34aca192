"""Sphinx configuration of the qilab documentation."""

import qilab

project = "qilab"
copyright = "2024, Blue Brain Project / EPFL"  # pylint: disable=redefined-builtin
version = qilab.__version__
release = qilab.__version__

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.autosummary",
    "sphinx.ext.mathjax",
    "sphinx.ext.napoleon",
]

# docstrings follow the google convention enforced by pydocstyle
napoleon_google_docstring = True
napoleon_numpy_docstring = False
autodoc_member_order = "bysource"
autodoc_default_options = {"undoc-members": False, "show-inheritance": True}

exclude_patterns = []

html_theme = "sphinx-limestone-theme"
html_theme_options = {
    "metadata_distribution": "qilab",
}
html_title = "qilab: quantum limits of bosonic sensing"
html_show_sourcelink = False
