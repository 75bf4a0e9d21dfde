"""Reference external value-function server for the coalition-worth bridge protocol."""

from .server import PluginServer, serve
from .values import model_stub_value, shoe_value, table_value

__all__ = ["PluginServer", "serve", "shoe_value", "table_value", "model_stub_value"]
