from .app import create_app
from .models import SceneResponse
from .session import TeleopSession, append_episode

__all__ = ["create_app", "SceneResponse", "TeleopSession", "append_episode"]
