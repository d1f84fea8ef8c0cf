import os
from datetime import datetime

import numpy as np
import peewee
from flask import json

import consts
import errors
from corpus import Vocabulary
from loggers import getLogger
from network import ModelConfig, Network


logger = getLogger(__name__)

# bound to one checkpoint file at a time with `bind_ctx`
database = peewee.SqliteDatabase(None)


class BaseModel(peewee.Model):
    class Meta:
        database = database


class Checkpoint(BaseModel):
    pk = peewee.AutoField()
    version = peewee.IntegerField(default=consts.CHECKPOINT_VERSION)
    seed = peewee.IntegerField(null=True)
    config = peewee.TextField()
    categories = peewee.TextField()
    vocabulary = peewee.TextField()
    vocabulary_hash = peewee.CharField()
    score = peewee.FloatField(null=True)
    date_created = peewee.DateTimeField(default=datetime.now)

    @property
    def resolved_config(self):
        return json.loads(self.config)

    def get_parameters(self):
        state = {}
        for param in self.parameters:
            shape = tuple(json.loads(param.shape))
            state[param.name] = np.frombuffer(bytes(param.data), dtype=param.dtype).reshape(shape)
        return state


class Parameter(BaseModel):
    pk = peewee.AutoField()
    checkpoint = peewee.ForeignKeyField(Checkpoint, backref='parameters', on_delete='CASCADE')
    name = peewee.CharField()
    shape = peewee.CharField()
    dtype = peewee.CharField()
    data = peewee.BlobField()

    class Meta:
        indexes = ((('checkpoint', 'name'), True),)


MODELS = [Checkpoint, Parameter]


def save_checkpoint(path, network, vocabulary, resolved_config=None, seed=None, score=None):
    """Writes one self-contained SQLite file; an existing file is replaced."""
    if os.path.exists(path):
        os.remove(path)
    db = peewee.SqliteDatabase(path)
    with db.bind_ctx(MODELS):
        with db:
            db.create_tables(MODELS)
            checkpoint = Checkpoint.create(
                seed=seed,
                config=json.dumps({'model': network.config.to_dict(), 'experiment': resolved_config or {}}),
                categories=json.dumps(network.categories),
                vocabulary=json.dumps(vocabulary.tokens),
                vocabulary_hash=vocabulary.hash,
                score=score,
            )
            for name, param in network.registry.items():
                values = np.ascontiguousarray(param.values)
                Parameter.create(
                    checkpoint=checkpoint,
                    name=name,
                    shape=json.dumps(list(values.shape)),
                    dtype=values.dtype.str,
                    data=values.tobytes(),
                )
    db.close()
    logger.info('saved checkpoint %s (%d parameters)', path, len(network.registry))
    return path


def load_checkpoint(path):
    """Returns (network, vocabulary, resolved config, metadata)."""
    if not os.path.isfile(path):
        raise errors.MissingFileError(path)
    db = peewee.SqliteDatabase(path)
    try:
        with db.bind_ctx(MODELS):
            with db:
                checkpoint = Checkpoint.select().order_by(Checkpoint.pk.desc()).get()
                state = checkpoint.get_parameters()
                resolved = checkpoint.resolved_config
                tokens = json.loads(checkpoint.vocabulary)
                categories = json.loads(checkpoint.categories)
                metadata = {
                    'version': checkpoint.version,
                    'seed': checkpoint.seed,
                    'score': checkpoint.score,
                    'vocabulary_hash': checkpoint.vocabulary_hash,
                    'date_created': checkpoint.date_created,
                }
    except (peewee.DatabaseError, Checkpoint.DoesNotExist) as exc:
        raise errors.CheckpointError(path, 'not a readable checkpoint ({})'.format(exc))
    finally:
        db.close()
    if metadata['version'] != consts.CHECKPOINT_VERSION:
        raise errors.CheckpointError(path, 'format version {} is not supported'.format(metadata['version']))
    vocabulary = Vocabulary(tokens)
    if vocabulary.hash != metadata['vocabulary_hash']:
        raise errors.CheckpointError(path, 'vocabulary hash does not match')
    model = dict(resolved['model'], categories=categories)
    network = Network(ModelConfig.from_dict(model), len(vocabulary), np.random.default_rng(0))
    try:
        network.registry.load_state_dict(state)
    except (errors.ContractError, errors.DimensionError) as exc:
        raise errors.CheckpointError(path, exc.message)
    return network, vocabulary, resolved['experiment'], metadata
