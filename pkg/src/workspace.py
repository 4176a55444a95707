"""Settings lookup and output folder helpers"""
import os
import shutil

try:
    import config
except ImportError:
    import config_default as config


def maybe_mkdir(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path


def fpath(root: str, fname: str) -> str:
    """A small function to avoid os.path.join(out, ...) everywhere"""
    return os.path.join(root, fname)


def delete_recursively(path: str, include_self: bool = False):
    """Removes everything in the folder, optionally the folder itself"""
    if not os.path.isdir(path):
        return
    if include_self:
        shutil.rmtree(path)
        return
    for name in os.listdir(path):
        full = os.path.join(path, name)
        if os.path.isdir(full):
            shutil.rmtree(full)
        else:
            os.remove(full)
