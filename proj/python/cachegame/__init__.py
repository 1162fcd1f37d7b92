"""Stackelberg caching-market solver: one operator pricing cache space,
competing content providers choosing how much to request."""

from cachegame._core import *  # noqa: F401,F403
