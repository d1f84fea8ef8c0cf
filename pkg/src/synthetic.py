"""Generated corpora with known answers, used for overfit and key-instance checks."""
import consts
import errors
from corpus import CorpusExample, KeyInstanceAnnotation


LEXICON_CATEGORIES = ('food', 'price', 'service')

LEXICON_TARGETS = {
    'food': ('pizza', 'pasta', 'sushi'),
    'price': ('price', 'bill', 'cost'),
    'service': ('waiter', 'staff', 'service'),
}

LEXICON_OPINIONS = {
    consts.NEG: ('awful', 'terrible', 'bad'),
    consts.NEU: ('okay', 'average', 'ordinary'),
    consts.POS: ('great', 'excellent', 'good'),
}


def _pick(rng, items):
    return items[int(rng.integers(len(items)))]


def make_lexicon_corpus(rng, size=20):
    """`size` sentences like "the pizza was great but the bill was awful"."""
    examples = []
    for number in range(size):
        count = 1 + int(rng.integers(2))
        categories = [LEXICON_CATEGORIES[i] for i in rng.permutation(len(LEXICON_CATEGORIES))[:count]]
        clauses, labels = [], []
        for category in categories:
            polarity = int(rng.integers(consts.NUM_CLASSES))
            clauses.append('the {} was {}'.format(_pick(rng, LEXICON_TARGETS[category]),
                                                  _pick(rng, LEXICON_OPINIONS[polarity])))
            labels.append((category, polarity))
        text = ' but '.join(clauses)
        examples.append(CorpusExample('lexicon-{}'.format(number), text, text.split(), labels))
    return examples


def trigger_word(category, index):
    return 'c{}t{}'.format(category, index)


def trigger_polarity(index):
    return index % consts.NUM_CLASSES


def make_trigger_corpus(n, rng, categories=3, triggers=10, fillers=40, min_length=6, max_length=12,
                        prefix='trigger'):
    """Sentences of filler words with one trigger word per mentioned category.

    Every trigger word belongs to one category and carries a fixed polarity,
    so the gold key instance of a (sentence, category) pair is the trigger's
    position. Returns (examples, annotations).
    """
    if categories < 1 or triggers < 1 or min_length < 1 or max_length < min_length:
        raise errors.ConfigError('trigger corpus needs positive sizes and min length <= max length')
    names = ['c{}'.format(j) for j in range(categories)]
    filler_words = ['w{}'.format(i) for i in range(fillers)]
    examples, annotations = [], []
    for number in range(n):
        sentence_id = '{}-{}'.format(prefix, number)
        count = 1 + int(rng.integers(min(3, categories)))
        chosen = sorted(int(j) for j in rng.permutation(categories)[:count])
        length = int(rng.integers(min_length, max_length + 1))
        tokens = [_pick(rng, filler_words) for _ in range(max(length, count))]
        positions = sorted(int(i) for i in rng.permutation(len(tokens))[:count])
        positions = [positions[i] for i in rng.permutation(count)]
        labels = []
        for j, position in zip(chosen, positions):
            index = int(rng.integers(triggers))
            tokens[position] = trigger_word(j, index)
            labels.append((names[j], trigger_polarity(index)))
            annotations.append(KeyInstanceAnnotation(sentence_id, names[j], {position: trigger_polarity(index)}))
        examples.append(CorpusExample(sentence_id, ' '.join(tokens), tokens, labels))
    return examples, annotations
