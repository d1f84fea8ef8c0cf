"""Corpus ingestion, vocabulary, pretrained vectors, batching and key-instance files."""
from collections import Counter, OrderedDict

import numpy as np
from flask import json
from lxml import etree

import config
import consts
import errors
import helpers
from decorators import use_cache
from loggers import getLogger
from serializers import ExampleSerializer, send_data


logger = getLogger(__name__)


class CorpusExample(object):

    def __init__(self, sentence_id, raw_text, tokens, labels):
        self.sentence_id = sentence_id
        self.raw_text = raw_text
        self.tokens = list(tokens)
        self.labels = [(category, polarity) for category, polarity in labels]

    @property
    def categories(self):
        return [category for category, _ in self.labels]

    def polarity(self, category):
        for name, polarity in self.labels:
            if name == category:
                return polarity
        return None

    def __eq__(self, other):
        return isinstance(other, CorpusExample) and (
            self.sentence_id, self.raw_text, self.tokens, self.labels) == (
            other.sentence_id, other.raw_text, other.tokens, other.labels)

    def __repr__(self):
        return 'CorpusExample({!r}, {})'.format(self.sentence_id, self.labels)


class KeyInstanceAnnotation(object):

    def __init__(self, sentence_id, category, polarities):
        self.sentence_id = sentence_id
        self.category = category
        self.polarities = {int(position): polarity for position, polarity in dict(polarities).items()}

    @property
    def positions(self):
        return set(self.polarities)

    @property
    def key(self):
        return self.sentence_id, self.category

    def __eq__(self, other):
        return isinstance(other, KeyInstanceAnnotation) and (
            self.sentence_id, self.category, self.polarities) == (
            other.sentence_id, other.category, other.polarities)

    def __repr__(self):
        return 'KeyInstanceAnnotation({!r}, {!r}, {})'.format(self.sentence_id, self.category, self.polarities)


# SemEval-2014 / MAMS xml
def parse_semeval_xml(path):
    try:
        tree = etree.parse(path)
    except etree.XMLSyntaxError as exc:
        raise errors.XmlParseError(path, exc.position[0] if exc.position else exc.lineno, exc.msg)
    except OSError:
        raise errors.MissingFileError(path)
    examples = []
    for number, sentence in enumerate(tree.iter('sentence')):
        sentence_id = sentence.get('id', str(number))
        labels, seen = [], set()
        for aspect in sentence.iter('aspectCategory'):
            category, polarity = aspect.get('category'), aspect.get('polarity')
            if polarity not in consts.XML_POLARITIES:
                raise errors.UnknownPolarityError(polarity, sentence_id)
            if category in seen:
                logger.warning('sentence %s repeats category %s, keeping the first label', sentence_id, category)
                continue
            seen.add(category)
            labels.append((category, consts.XML_POLARITIES[polarity]))
        if not labels:
            continue
        text = sentence.findtext('text') or ''
        tokens = helpers.tokenize(text)
        if not tokens:
            raise errors.EmptySequenceError('sentence {} of {}'.format(sentence_id, path))
        examples.append(CorpusExample(sentence_id, text, tokens, labels))
    logger.info('parsed %d sentences with aspect categories from %s', len(examples), path)
    return examples


def filter_conflicts(examples):
    result = []
    for example in examples:
        labels = [(c, p) for c, p in example.labels if p != consts.CONFLICT]
        if labels:
            result.append(CorpusExample(example.sentence_id, example.raw_text, example.tokens, labels))
    return result


def make_hard_test_set(examples):
    return [example for example in examples
            if len(example.labels) >= 2 and len({p for _, p in example.labels}) >= 2]


def split_by_ids(examples, ids):
    """Returns (rest, selected) where selected holds the examples whose id is listed."""
    ids = set(ids)
    rest = [example for example in examples if example.sentence_id not in ids]
    selected = [example for example in examples if example.sentence_id in ids]
    missing = ids - {example.sentence_id for example in selected}
    if missing:
        logger.warning('%d listed sentence ids are not in the corpus', len(missing))
    return rest, selected


def category_inventory(examples):
    return sorted({category for example in examples for category in example.categories})


def corpus_statistics(examples):
    polarities = Counter()
    categories = Counter()
    for example in examples:
        for category, polarity in example.labels:
            polarities[consts.POLARITIES.get(polarity, 'Conflict')] += 1
            categories[category] += 1
    return {
        'sentences': len(examples),
        'multi': sum(1 for example in examples if len(example.labels) > 1),
        'polarities': {name: polarities[name] for name in ('Pos', 'Neg', 'Neu', 'Conflict')
                       if name != 'Conflict' or polarities[name]},
        'categories': OrderedDict(sorted(categories.items())),
    }


# internal corpus format, one json record per line
def example_from_record(record):
    labels = []
    for category, name in record['labels']:
        if name == 'Conflict':
            labels.append((category, consts.CONFLICT))
        elif name in consts.POLARITIES_NAMES:
            labels.append((category, consts.POLARITIES_NAMES[name]))
        else:
            raise errors.UnknownPolarityError(name, record['id'])
    return CorpusExample(record['id'], record['text'], record['tokens'], labels)


def write_corpus(path, examples):
    with open(path, 'w', encoding='utf-8') as f:
        for example in examples:
            send_data(f, example, ExampleSerializer)


def read_corpus(path):
    if path.lower().endswith('.xml'):
        return parse_semeval_xml(path)
    if not helpers.check_file(path):
        raise errors.MissingFileError(path)
    examples = []
    with open(path, encoding='utf-8') as f:
        for number, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                examples.append(example_from_record(json.loads(line)))
            except (ValueError, KeyError, TypeError) as exc:
                raise errors.CorpusFormatError(number, path, exc)
    return examples


class Vocabulary(object):
    """Token index with pad at 0 and unknown at 1."""

    def __init__(self, tokens, counts=None):
        self.tokens = list(tokens)
        if self.tokens[:2] != [consts.PAD, consts.UNK]:
            raise errors.ContractError('vocabulary must start with {} and {}'.format(consts.PAD, consts.UNK))
        self.index = {token: i for i, token in enumerate(self.tokens)}
        self.counts = dict(counts or {})

    def __len__(self):
        return len(self.tokens)

    def __contains__(self, token):
        return token in self.index

    def lookup(self, token):
        return self.index.get(token, consts.UNK_INDEX)

    def encode(self, tokens):
        return [self.lookup(token) for token in tokens]

    @property
    def hash(self):
        return helpers.content_hash(self.tokens)


def build_vocabulary(examples, min_count=config.MIN_COUNT):
    counts = Counter(token for example in examples for token in example.tokens)
    for reserved in (consts.PAD, consts.UNK):
        counts.pop(reserved, None)
    kept = sorted((token for token, count in counts.items() if count >= min_count),
                  key=lambda token: (-counts[token], token))
    return Vocabulary([consts.PAD, consts.UNK] + kept, {token: counts[token] for token in kept})


def _is_number(text):
    try:
        float(text)
    except ValueError:
        return False
    return True


@use_cache(name='corpus.read_vectors')
def read_vectors(path, dim, wanted):
    """Token followed by `dim` whitespace-separated reals per line; tokens may contain spaces."""
    wanted = set(wanted)
    vectors = {}
    with open(path, encoding='utf-8', errors='replace') as f:
        for number, line in enumerate(f, 1):
            fields = line.split()
            if not fields:
                continue
            # word2vec text files open with a "count dim" header
            if number == 1 and len(fields) == 2 and all(x.isdigit() for x in fields):
                continue
            head, values = fields[:-dim], fields[-dim:]
            if len(fields) <= dim or any(_is_number(x) for x in head[1:]):
                raise errors.VectorFormatError(number, path, len(fields) - 1, dim)
            token = ' '.join(head)
            if token in wanted and token not in vectors:
                try:
                    vectors[token] = np.array([float(x) for x in values])
                except ValueError:
                    raise errors.VectorFormatError(number, path, 'non-numeric', dim)
    return vectors


def load_pretrained_vectors(path, vocabulary, dim, rng):
    if not helpers.check_file(path):
        raise errors.MissingFileError(path)
    vectors = read_vectors(path, dim, tuple(vocabulary.tokens[2:]))
    table = rng.uniform(-config.EMBEDDING_INIT_RANGE, config.EMBEDDING_INIT_RANGE, size=(len(vocabulary), dim))
    for token, vector in vectors.items():
        table[vocabulary.index[token]] = vector
    table[consts.PAD_INDEX] = 0.0
    logger.info('pretrained vectors cover %d of %d tokens', len(vectors), len(vocabulary) - 2)
    return table


class Batch(object):
    """Padded batch. `items` holds (example, queried category indices) per row."""

    def __init__(self, items, token_ids, lengths, acd_targets, sentiment_targets):
        self.items = items
        self.token_ids = token_ids
        self.lengths = lengths
        self.acd_targets = acd_targets
        self.sentiment_targets = sentiment_targets

    @property
    def size(self):
        return len(self.items)

    @property
    def query_mask(self):
        return self.sentiment_targets != consts.UNKNOWN

    @property
    def sentence_ids(self):
        return [example.sentence_id for example, _ in self.items]


def batch_items(examples, categories, mode=consts.MODE_MULTI, queried=None):
    """Multi mode: one item per sentence; single mode: one per (sentence, category).

    `queried` optionally overrides the gold categories with explicit names.
    """
    if mode not in consts.MODES:
        raise errors.ConfigError('mode {} is not one of {}'.format(mode, ', '.join(consts.MODES)))
    index = {category: j for j, category in enumerate(categories)}
    items = []
    for example in examples:
        names = example.categories if queried is None else queried
        for category in names:
            if category not in index:
                raise errors.DataError('category {} of sentence {} is not in the inventory'.format(
                    category, example.sentence_id))
        ids = [index[category] for category in names]
        if mode == consts.MODE_MULTI:
            items.append((example, ids))
        else:
            items.extend((example, [j]) for j in ids)
    return items


def make_batch(items, vocabulary, categories):
    lengths = np.array([len(example.tokens) for example, _ in items], dtype=np.int64)
    if (lengths == 0).any():
        raise errors.EmptySequenceError('batch')
    token_ids = np.full((len(items), lengths.max()), consts.PAD_INDEX, dtype=np.int64)
    acd_targets = np.zeros((len(items), len(categories)))
    sentiment_targets = np.full((len(items), len(categories)), consts.UNKNOWN, dtype=np.int64)
    index = {category: j for j, category in enumerate(categories)}
    for row, (example, queried) in enumerate(items):
        token_ids[row, :lengths[row]] = vocabulary.encode(example.tokens)
        for category, polarity in example.labels:
            if category in index:
                acd_targets[row, index[category]] = 1.0
        for j in queried:
            polarity = example.polarity(categories[j])
            if polarity is not None:
                sentiment_targets[row, j] = polarity
    return Batch(items, token_ids, lengths, acd_targets, sentiment_targets)


def batch(examples, size, mode, rng, vocabulary, categories, queried=None):
    if size < 1:
        raise errors.ConfigError('batch size must be at least 1')
    items = batch_items(examples, categories, mode, queried)
    order = rng.permutation(len(items)) if rng is not None else np.arange(len(items))
    for start in range(0, len(items), size):
        yield make_batch([items[i] for i in order[start:start + size]], vocabulary, categories)


# key-instance annotations: "sentence_id<TAB>category<TAB>pos:Pol pos:Pol"
def format_annotation(annotation):
    pairs = ' '.join('{}:{}'.format(position, consts.POLARITIES[annotation.polarities[position]])
                     for position in sorted(annotation.polarities))
    return '\t'.join([annotation.sentence_id, annotation.category, pairs])


def parse_annotation(line, number, path):
    fields = line.rstrip('\n').split('\t')
    if len(fields) != 3:
        raise errors.CorpusFormatError(number, path, 'expected 3 tab-separated fields')
    sentence_id, category, pairs = fields
    polarities = {}
    for pair in pairs.split():
        position, _, name = pair.partition(':')
        if not position.isdigit() or name not in consts.POLARITIES_NAMES:
            raise errors.AnnotationError(pair, sentence_id, 'expected position:Neg|Neu|Pos')
        polarities[int(position)] = consts.POLARITIES_NAMES[name]
    return KeyInstanceAnnotation(sentence_id, category, polarities)


def check_annotations(annotations, examples):
    lengths = {example.sentence_id: len(example.tokens) for example in examples}
    for annotation in annotations:
        if annotation.sentence_id not in lengths:
            raise errors.AnnotationError(annotation.category, annotation.sentence_id, 'sentence is not in the corpus')
        for position in annotation.positions:
            if not 0 <= position < lengths[annotation.sentence_id]:
                raise errors.AnnotationError(annotation.category, annotation.sentence_id,
                                             'position {} is out of range'.format(position))
    return annotations


def read_key_instance_annotations(path, examples=None):
    if not helpers.check_file(path):
        raise errors.MissingFileError(path)
    annotations = []
    with open(path, encoding='utf-8') as f:
        for number, line in enumerate(f, 1):
            if line.strip():
                annotations.append(parse_annotation(line, number, path))
    if examples is not None:
        check_annotations(annotations, examples)
    return annotations


def write_key_instance_annotations(path, annotations):
    with open(path, 'w', encoding='utf-8') as f:
        for annotation in annotations:
            f.write(format_annotation(annotation))
            f.write('\n')


# released key-instance files, one json record per (sentence, category):
# {"sentence_id": "...", "category": "...", "key_instances": [{"word": "...", "polarity": "negative"}, ...]}
# an entry names its word by "position" or by surface "word"; words resolve left to right
def annotation_polarity(name, sentence_id):
    if name in consts.POLARITIES_NAMES:
        return consts.POLARITIES_NAMES[name]
    polarity = consts.XML_POLARITIES.get(str(name).lower())
    if polarity is None or polarity == consts.CONFLICT:
        raise errors.AnnotationError(name, sentence_id, 'expected negative, neutral or positive')
    return polarity


def resolve_key_instance(entry, tokens, taken, sentence_id):
    if 'position' in entry:
        try:
            return int(entry['position'])
        except (TypeError, ValueError):
            raise errors.AnnotationError(entry, sentence_id, 'position is not an integer')
    word = str(entry.get('word', '')).lower()
    for position, token in enumerate(tokens):
        if token.lower() == word and position not in taken:
            return position
    raise errors.AnnotationError(entry, sentence_id, 'word is not in the sentence')


def convert_key_instance_annotations(path, examples):
    if not helpers.check_file(path):
        raise errors.MissingFileError(path)
    tokens = {example.sentence_id: example.tokens for example in examples}
    annotations = []
    with open(path, encoding='utf-8') as f:
        for number, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                sentence_id, category = str(record['sentence_id']), record['category']
                entries = list(record['key_instances'])
            except (ValueError, KeyError, TypeError):
                raise errors.CorpusFormatError(number, path, 'expected sentence_id, category and key_instances')
            if sentence_id not in tokens:
                raise errors.AnnotationError(category, sentence_id, 'sentence is not in the corpus')
            polarities = {}
            for entry in entries:
                if not isinstance(entry, dict) or 'polarity' not in entry:
                    raise errors.AnnotationError(entry, sentence_id, 'expected position or word with a polarity')
                position = resolve_key_instance(entry, tokens[sentence_id], polarities, sentence_id)
                polarities[position] = annotation_polarity(entry['polarity'], sentence_id)
            annotations.append(KeyInstanceAnnotation(sentence_id, category, polarities))
    logger.info('converted %d key-instance annotations from %s', len(annotations), path)
    return check_annotations(annotations, examples)
