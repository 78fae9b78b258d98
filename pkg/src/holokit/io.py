"""Input loading shared by the CLI: files, stdin and ``builtin:`` names."""

from __future__ import annotations

import hashlib
import json
import sys
from pathlib import Path

from holokit import contextuality, games, kscolor, pairwise
from holokit.groups import element_from_json
from holokit.holonomy import DiscreteConnection, Graph

BUILTIN = "builtin:"


class InputError(ValueError):
    pass


class Source:
    """Raw bytes of one input plus the digest recorded in reports."""

    def __init__(self, ref: str):
        self.ref = ref
        if ref.startswith(BUILTIN):
            self.builtin = ref[len(BUILTIN):]
            self.data = b""
            self.digest = "builtin:" + self.builtin
            return
        self.builtin = None
        try:
            self.data = sys.stdin.buffer.read() if ref == "-" else Path(ref).read_bytes()
        except OSError as exc:
            raise InputError(f"cannot read {ref}: {exc.strerror or exc}") from exc
        self.digest = "sha256:" + hashlib.sha256(self.data).hexdigest()

    def text(self) -> str:
        return self.data.decode("utf-8")

    def json(self):
        try:
            return json.loads(self.text())
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise InputError(f"{self.ref} is not valid JSON: {exc}") from exc


def _unknown(kind, name, known):
    return InputError(f"unknown builtin {kind} {name!r}; known: {', '.join(sorted(known))}")


def builtin_models():
    return contextuality.builtin_models()


def builtin_games():
    return {"chsh": games.chsh_game()}


def load_model(src: Source) -> contextuality.EmpiricalModel:
    if src.builtin is not None:
        models = builtin_models()
        if src.builtin not in models:
            raise _unknown("model", src.builtin, models)
        return models[src.builtin]
    return contextuality.model_from_json(src.json())


def load_game(src: Source) -> games.NonlocalGame:
    if src.builtin is not None:
        known = builtin_games()
        name = src.builtin.removesuffix("-game")
        if name not in known:
            raise _unknown("game", src.builtin, known)
        return known[name]
    return games.game_from_json(src.json())


BELL_PAIRING = (("a", "alpha"), ("b", "beta"))


def _pairing(alice, bob):
    return (alice, bob) if alice and bob else BELL_PAIRING


def load_strategy(src: Source, alice=None, bob=None):
    """A strategy document, or an empirical model read as a strategy."""
    if src.builtin is not None:
        model = load_model(src)
        return games.model_to_strategy(model, *_pairing(alice, bob))
    obj = src.json()
    if isinstance(obj, dict) and "contexts" in obj:
        model = contextuality.model_from_json(obj)
        return games.model_to_strategy(model, *_pairing(alice, bob))
    return games.strategy_from_json(obj)


def load_rays(src: Source):
    if src.builtin is not None:
        if src.builtin != "peres":
            raise _unknown("ray set", src.builtin, ["peres"])
        return kscolor.peres_rays()
    return kscolor.rays_from_json(src.json())


def load_matrix(src: Source) -> pairwise.PCMatrix:
    if src.builtin is not None:
        raise InputError("no builtin pairwise-comparison matrices")
    text = src.text()
    if src.ref.endswith(".csv") or not text.lstrip().startswith("{"):
        return pairwise.matrix_from_csv(text)
    return pairwise.matrix_from_json(src.json())


def connection_from_json(obj) -> DiscreteConnection:
    try:
        n = int(obj["n"])
        group = obj.get("group", "posreal")
        hol = {}
        for e in obj["edges"]:
            hol[(int(e["i"]), int(e["j"]))] = element_from_json(e["g"], group)
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed connection document: {exc}") from exc
    return DiscreteConnection(Graph(n, hol.keys()), hol, group)


def connection_to_json(conn: DiscreteConnection) -> dict:
    def enc(g):
        d = g.to_json()
        d.pop("group")
        return d["value"] if set(d) == {"value"} else d

    return {
        "n": conn.n,
        "group": conn.group,
        "edges": [{"i": i, "j": j, "g": enc(g)} for (i, j), g in sorted(conn.items())],
    }


def load_connection(src: Source) -> DiscreteConnection:
    if src.builtin is not None:
        raise InputError("no builtin connections")
    return connection_from_json(src.json())
