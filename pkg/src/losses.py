import numpy as np

import autodiff as ad
import config
import consts
import errors


def acd_loss(y_hat, y):
    """Binary cross-entropy summed over every category (and every row of a batch)."""
    y_hat = ad.as_tensor(y_hat)
    y = np.asarray(y, dtype=ad.get_dtype())
    if y.shape != y_hat.shape:
        raise errors.ContractError('detection targets {} for predictions {}'.format(y.shape, y_hat.shape))
    positive = ad.mul(ad.Tensor(y), ad.log(y_hat, config.LOG_CLAMP))
    negative = ad.mul(ad.Tensor(1.0 - y), ad.log(ad.sub(1.0, y_hat), config.LOG_CLAMP))
    return ad.neg(ad.reduce_sum(ad.add(positive, negative)))


def one_hot(gold, mask=None):
    gold = np.asarray(gold, dtype=np.int64)
    if mask is None:
        mask = np.ones(gold.shape, dtype=bool)
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != gold.shape:
        raise errors.ContractError('sentiment mask {} for targets {}'.format(mask.shape, gold.shape))
    bad = mask & ((gold < 0) | (gold >= consts.NUM_CLASSES))
    if bad.any():
        raise errors.ContractError('gold polarity {} is not one of {}'.format(
            int(gold[bad][0]), sorted(consts.POLARITIES)))
    target = np.zeros(gold.shape + (consts.NUM_CLASSES,), dtype=ad.get_dtype())
    rows = np.nonzero(mask)
    target[rows + (gold[rows],)] = 1.0
    return target


def acsa_loss(p, gold, mask=None):
    """Cross-entropy over the queried categories only; `mask` marks the queried entries."""
    p = ad.as_tensor(p)
    target = one_hot(gold, mask)
    if target.shape != p.shape:
        raise errors.ContractError('sentiment targets {} for distributions {}'.format(target.shape, p.shape))
    return ad.neg(ad.reduce_sum(ad.mul(ad.Tensor(target), ad.log(p, config.LOG_CLAMP))))


def combined_loss(acd, acsa, registry, beta=config.BETA, l2=config.L2):
    """L_A + beta * L_S + l2 * sum of squared trainable parameters."""
    total = ad.add(acd, ad.mul(acsa, beta))
    if l2:
        total = ad.add(total, ad.mul(registry.l2_penalty(), l2))
    return total


def regularized(loss, registry, l2=config.L2):
    if not l2:
        return loss
    return ad.add(loss, ad.mul(registry.l2_penalty(), l2))
