# Sphinx configuration of the MSS memristor simulator documentation.
#
# Build with `sphinx-build -b html docs docs/_build` from the repository root.
# The API pages are generated by autodoc, so numpy, scipy, PyYAML and click must be importable.

import os
import sys

sys.path.insert(0, os.path.abspath(".."))

from mss_memristor.constants import VERSION  # pylint: disable=wrong-import-position

# -- Project -----------------------------------------------------------------

project = "MSS memristor simulator"
description = "Generalized metastable switch memristor model, series circuit simulator and parameter fitter"
copyright = "2026, The MSS memristor simulator authors"
author = "The MSS memristor simulator authors"

version = VERSION
release = VERSION

# -- General -----------------------------------------------------------------

extensions = ["sphinx.ext.autodoc", "sphinx.ext.napoleon", "sphinx.ext.mathjax"]

templates_path = []
exclude_patterns = ["_build", "README.md"]

source_suffix = ".rst"
master_doc = "index"
language = "en"

pygments_style = None
add_module_names = False

# -- Autodoc -----------------------------------------------------------------

autodoc_member_order = "bysource"
autodoc_default_options = {"members": True, "show-inheritance": True}

# Docstrings are numpy style; dataclass fields are listed as attributes.
napoleon_google_docstring = False
napoleon_numpy_docstring = True
napoleon_include_init_with_doc = True
napoleon_use_ivar = True

# -- HTML --------------------------------------------------------------------

html_theme = "classic"
html_title = f"{project} {release}"
html_short_title = "mss-sim"
html_static_path = []
html_theme_options = {"sidebarwidth": 260}
htmlhelp_basename = "mssmemristordoc"
