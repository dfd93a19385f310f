import json
import logging
import os

logger = logging.getLogger(__name__)


def setup_output_dir(output_dir):
    """Create the run directory if it doesn't exist."""
    if not os.path.exists(output_dir):
        os.makedirs(output_dir)
        logger.debug("created %s", output_dir)
    return output_dir


def save_json(data, path):
    """Write ``data`` as indented JSON, creating parent directories."""
    directory = os.path.dirname(path)
    if directory:
        setup_output_dir(directory)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(data, f, indent=4, sort_keys=True)
    return path
