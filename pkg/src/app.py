from flask import Flask

import config


# only used for its template environment; nothing is served
app = Flask(__name__, instance_relative_config=True, template_folder=config.TEMPLATES_DIR)
app.config.from_object('config')
