import os
from functools import wraps

import errors
from cache import get_cache, set_cache, get_cache_func_name


def use_cache(name=None):
    """Memoize on the call arguments; a file argument also keys on its mtime."""
    def wrapper(f):
        @wraps(f)
        def decorator(*args, **kwargs):
            fn = name if name else '.'.join([f.__module__, f.__name__])
            stamps = [os.path.getmtime(a) for a in args if isinstance(a, str) and os.path.isfile(a)]
            cache_name = get_cache_func_name(fn, stamps, *args, **kwargs)
            results = get_cache(cache_name)
            if results is not None:
                return results
            results = f(*args, **kwargs)
            set_cache(cache_name, results)
            return results
        return decorator
    return wrapper


def validate(validator):
    """Validate the command options, then expose the cleaned values as `self.data`."""
    def wrapper(method):
        @wraps(method)
        def decorator(self, *args, **kwargs):
            val = validator(self.options)
            if not val.is_valid():
                raise errors.ConfigError(val.get_error())
            self.data = val.cleaned_data
            return method(self, *args, **kwargs)
        return decorator
    return wrapper
