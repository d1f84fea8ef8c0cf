import os
import re
import string
from hashlib import md5

import consts
import errors


_PUNCT = re.escape(string.punctuation)
_LEADING = re.compile(r'^([{}])(.*)$'.format(_PUNCT), re.S)
_TRAILING = re.compile(r'^(.*?)([{}])$'.format(_PUNCT), re.S)


def tokenize(text):
    # lowercase, whitespace split, then peel punctuation off both ends of a word
    tokens = []
    for word in text.lower().split():
        head, tail = [], []
        while len(word) > 1:
            match = _LEADING.match(word)
            if not match:
                break
            head.append(match.group(1))
            word = match.group(2)
        while len(word) > 1:
            match = _TRAILING.match(word)
            if not match:
                break
            tail.insert(0, match.group(2))
            word = match.group(1)
        tokens.extend(head + [word] + tail)
    return tokens


def content_hash(items):
    return md5('\n'.join(items).encode()).hexdigest()


def checkpoint_name(seed):
    return consts.CHECKPOINT_PATTERN.format(seed)


def log_name(seed):
    return consts.LOG_PATTERN.format(seed)


def check_file(path):
    return path is not None and os.path.isfile(path)


def read_id_list(path):
    with open(path, encoding='utf-8') as f:
        return [line.strip() for line in f if line.strip()]


def read_key_values(path):
    # flat `key = value` file, `#` starts a comment
    values = {}
    with open(path, encoding='utf-8') as f:
        for number, line in enumerate(f, 1):
            line = line.split('#', 1)[0].strip()
            if not line:
                continue
            if '=' not in line:
                raise errors.ConfigError('line {} of {} is not key = value'.format(number, path))
            key, value = line.split('=', 1)
            values[key.strip().replace('-', '_')] = value.strip()
    return values


def write_key_values(path, values):
    with open(path, 'w', encoding='utf-8') as f:
        for key in sorted(values):
            value = values[key]
            if isinstance(value, (list, tuple)):
                value = ','.join(str(x) for x in value)
            elif value is None:
                continue
            f.write('{} = {}\n'.format(key, value))
