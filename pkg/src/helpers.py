import hashlib
import importlib
import json
import logging

log = logging.getLogger(__name__)


def tagged_hash(tag: str, data: bytes) -> bytes:
    """Tag-specific hash, keeps digests of different kinds of data apart"""
    hashtag = hashlib.sha256(tag.encode()).digest()
    return hashlib.sha256(hashtag + hashtag + data).digest()


def canonical_json(obj) -> str:
    """JSON text that is identical for equal objects"""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def read_json(fname: str):
    with open(fname, "r") as f:
        return json.load(f)


def write_json(fname: str, obj, indent=2):
    with open(fname, "w") as f:
        json.dump(obj, f, indent=indent, sort_keys=True)
        f.write("\n")


def load_evaluators(module="fitness", whitelist=None, blacklist=None) -> dict:
    """
    Imports every submodule listed in `module.__all__`
    and collects evaluator classes by their ID.
    """
    mod = importlib.import_module(module)
    mods = mod.__all__
    if blacklist is not None:
        mods = [m for m in mods if m not in blacklist]
    if whitelist is not None:
        mods = [m for m in mods if m in whitelist]
    evaluators = {}
    for modname in mods:
        sub = importlib.import_module("%s.%s" % (module, modname))
        classes = getattr(sub, "EVALUATORS", None)
        if not classes:
            log.warning("Failed loading evaluators from %s", modname)
            continue
        for cls in classes:
            evaluators[cls.ID] = cls
    return evaluators
