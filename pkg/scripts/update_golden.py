"""Regenerate the golden machine reports for the named instances.

Run after an intentional change to the report schema, then review the diff.
"""

import dataclasses
from pathlib import Path

from latticeea.generators import NAMED
from latticeea.report import analyze, to_json


@dataclasses.dataclass
class Config:
    out_dir: Path = Path(__file__).resolve().parent.parent / "tests" / "golden"


def main(cfg: Config = Config()) -> None:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    for name, make in sorted(NAMED.items()):
        path = cfg.out_dir / f"{name}.json"
        path.write_text(to_json(analyze(make())))
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
