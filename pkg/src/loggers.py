import logging


logger = logging.getLogger('mil-acsa')

FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


def getLogger(name, level=logging.INFO):
    log = logging.getLogger(name)
    log.setLevel(level)
    return log


def setup(verbose=False):
    level = logging.DEBUG if verbose else logging.INFO
    root = logging.getLogger()
    if not root.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(FORMAT))
        root.addHandler(handler)
    root.setLevel(level)
    for name in list(logging.root.manager.loggerDict):
        logging.getLogger(name).setLevel(level)
    return root
