import os
import sys

# ctest points NAVSIM_MODULE_DIR at the build tree holding _navsim*.so
module_dir = os.environ.get("NAVSIM_MODULE_DIR")
if module_dir and module_dir not in sys.path:
    sys.path.insert(0, module_dir)
