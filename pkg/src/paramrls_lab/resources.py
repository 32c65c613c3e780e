import logging

from paramrls_lab.config import load_settings
from paramrls_lab.errors import ScenarioError
from paramrls_lab.experiments.scenarios import find_scenario_file

logger = logging.getLogger("paramrls-lab")

SCHEME = "scenario://"


async def handle_read_resource(uri: str) -> str:
    """Raw JSON of the scenario named by a scenario://{name} URI."""
    uri = str(uri)
    if not uri.startswith(SCHEME):
        raise ValueError(f"Unsupported resource URI: {uri}")
    name = uri[len(SCHEME):].strip("/")
    if not name or "/" in name:
        raise ScenarioError(f"Invalid scenario name in URI: {uri}")
    path = find_scenario_file(name, load_settings())
    logger.info(f"Serving scenario resource {uri} from {path}")
    return path.read_text(encoding="utf-8")
