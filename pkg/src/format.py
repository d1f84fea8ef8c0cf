import numpy as np


def _float(value, digits=4, **kwargs):
    return round(float(value), digits)


def _dict(value, level=2, digits=4, **kwargs):
    if level > 0:
        return {k: format(v, level - 1, digits) for k, v in value.items()}
    return value


def _list(value, level=2, digits=4, **kwargs):
    if level > 0:
        return [format(x, level - 1, digits) for x in value]
    return value


def _tuple(value, level=2, digits=4, **kwargs):
    if level > 0:
        return tuple([format(x, level - 1, digits) for x in value])
    return value


def _ndarray(value, level=2, digits=4, **kwargs):
    return _list(value.tolist(), level=level, digits=digits)


FORMATS = {
    float: _float,
    np.float32: _float,
    np.float64: _float,
    dict: _dict,
    list: _list,
    tuple: _tuple,
    np.ndarray: _ndarray,
}


def format(value, level=2, digits=4):
    try:
        return FORMATS.get(type(value), lambda a, **k: a)(value, level=level, digits=digits)
    except (TypeError, ValueError):
        return value


def percent(value, digits=3):
    return '{:.{}f}'.format(100.0 * value, digits)


def mean_std(mean, std, digits=3):
    return '{}±({})'.format(percent(mean, digits), percent(std, digits))


def _bool(value):
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ('1', 'true', 'yes', 'on'):
        return True
    if text in ('0', 'false', 'no', 'off'):
        return False
    raise ValueError(value)


def _sequence(item_type):
    def parse(value):
        if isinstance(value, (list, tuple)):
            return [item_type(x) for x in value]
        return [item_type(x) for x in str(value).replace(',', ' ').split()]
    return parse


ARGS_FORMATS = {
    str: lambda a: str(a),
    float: lambda a: float(a),
    int: lambda a: int(a),
    bool: _bool,
    'int_list': _sequence(int),
    'float_list': _sequence(float),
    'str_list': _sequence(str),
}


def get_argument(value, _type):
    if value is None:
        raise TypeError('value is not set')
    return ARGS_FORMATS.get(_type, lambda a: _type(a))(value)
