import copy
from hashlib import md5


# in-process store; entries live until cleared or the process exits
_store = {}


def set_cache(key, data):
    _store[key] = data


def get_cache(key):
    value = _store.get(key)
    if value is None:
        return None
    return copy.copy(value)


def clear_cache():
    _store.clear()


def get_cache_func_name(name, *args, **kwargs):
    fn = '{}(*{}, **{})'.format(name, args, sorted(kwargs.items()))
    return 'cached_func_{}'.format(md5(fn.encode()).hexdigest())
