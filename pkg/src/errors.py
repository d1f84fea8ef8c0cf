import consts


class BaseError(Exception):
    message = 'mil-acsa base error'
    exit_code = consts.EXIT_FAILURE

    def __str__(self):
        return self.message


class BaseArgError(BaseError):
    def __init__(self, *args, **kwargs):
        self.message = self.message.format(*args, **kwargs)
        super(BaseArgError, self).__init__(*args)


# autodiff and layer contract errors
class DimensionError(BaseArgError):
    message = 'dimension mismatch: {}'


class ContractError(BaseArgError):
    message = 'contract violated: {}'


# configuration errors
class ConfigError(BaseArgError):
    message = 'configuration error: {}'
    exit_code = consts.EXIT_CONFIG


class ValidationError(ConfigError):
    message = '{} is not valid'


class ValidationRequiredError(ValidationError):
    message = '{} is required'


class UnknownKeyError(ConfigError):
    message = 'unknown configuration key {}'


class MissingFileError(ConfigError):
    message = 'file {} does not exist'


# data errors
class DataError(BaseArgError):
    message = 'data error: {}'
    exit_code = consts.EXIT_DATA


class XmlParseError(DataError):
    message = 'malformed XML in {} at line {}: {}'


class UnknownPolarityError(DataError):
    message = 'unknown polarity {!r} in sentence {}'


class EmptySequenceError(DataError):
    message = 'empty token sequence in {}'


class TokenIndexError(DataError):
    message = 'token index {} at position {} is out of vocabulary range {}'


class VectorFormatError(DataError):
    message = 'line {} of {} has {} values, expected {}'


class AnnotationError(DataError):
    message = 'annotation {} for sentence {}: {}'


class CorpusFormatError(DataError):
    message = 'line {} of {}: {}'


class CheckpointError(DataError):
    message = 'checkpoint {}: {}'


# training errors
class TrainingDivergedError(BaseArgError):
    message = 'training diverged at epoch {} batch {}: loss is {}'
    exit_code = consts.EXIT_DIVERGED
