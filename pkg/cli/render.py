"""
Text rendering of command output from Jinja2 templates
"""
import logging
from functools import lru_cache

from jinja2 import Environment, FileSystemLoader, StrictUndefined, select_autoescape

import config

logger = logging.getLogger(__name__)


@lru_cache(maxsize=1)
def _environment() -> Environment:
    """Initialize Jinja2 environment for template loading"""
    return Environment(
        loader=FileSystemLoader(config.TEMPLATES_PATH),
        autoescape=select_autoescape(['html', 'xml']),
        undefined=StrictUndefined,
        trim_blocks=True,
        lstrip_blocks=True
    )


def render(template_name: str, **context) -> str:
    template = _environment().get_template(template_name)
    return template.render(**context)
