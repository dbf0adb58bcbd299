"""Studio configuration: TOML file, env-var overrides, printable defaults."""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .fusion import DEFAULT_ALPHA_GRID
from .gateway import GatewayConfig

ENV_WORKSPACE = "SEMPROJ_WORKSPACE"


@dataclass(frozen=True)
class StudioConfig:
    workspace: str = "./semproj-workspace"
    embed_url: str = "http://127.0.0.1:8801/embed"
    classify_url: str = "http://127.0.0.1:8802/v1/chat/completions"
    model_tag: str = "clip-vit-b32"
    parallelism: int = 4
    max_retries: int = 3
    timeout: float = 30.0
    expected_dim: int = 512
    alpha_grid: tuple[float, ...] = DEFAULT_ALPHA_GRID
    label_source: str = "auto"
    strict_ingest: bool = True
    host: str = "127.0.0.1"
    port: int = 8600
    ui_dir: str = ""

    def gateway(self) -> GatewayConfig:
        return GatewayConfig(
            embed_url=self.embed_url,
            classify_url=self.classify_url,
            parallelism=self.parallelism,
            max_retries=self.max_retries,
            timeout=self.timeout,
            model_tag=self.model_tag,
            expected_dim=self.expected_dim,
        ).with_env_overrides()

    def with_env_overrides(self) -> "StudioConfig":
        cfg = self
        if os.environ.get(ENV_WORKSPACE):
            cfg = replace(cfg, workspace=os.environ[ENV_WORKSPACE])
        gw = cfg.gateway()
        return replace(cfg, embed_url=gw.embed_url, classify_url=gw.classify_url)

    @classmethod
    def load(cls, path: str | Path | None = None) -> "StudioConfig":
        values: dict = {}
        if path is not None:
            doc = tomllib.loads(Path(path).read_text())
            known = {f.name for f in fields(cls)}
            unknown = set(doc) - known
            if unknown:
                raise ValueError(f"unknown config keys: {sorted(unknown)}")
            if "alpha_grid" in doc:
                doc["alpha_grid"] = tuple(float(a) for a in doc["alpha_grid"])
            values = doc
        return cls(**values).with_env_overrides()

    def show(self) -> str:
        """Effective settings in TOML form."""
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, str):
                lines.append(f'{f.name} = "{v}"')
            elif isinstance(v, bool):
                lines.append(f"{f.name} = {'true' if v else 'false'}")
            elif isinstance(v, tuple):
                lines.append(f"{f.name} = [{', '.join(str(x) for x in v)}]")
            else:
                lines.append(f"{f.name} = {v}")
        return "\n".join(lines) + "\n"
