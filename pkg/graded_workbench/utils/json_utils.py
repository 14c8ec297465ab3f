import json
from pathlib import Path
from typing import Any


def to_plain(item: Any) -> Any:
    # Handle Pydantic models if present
    if hasattr(item, "model_dump"):
        return item.model_dump(mode="json")
    return item


def canonical_json(data: Any) -> str:
    """Sorted keys, fixed separators: identical input gives identical bytes."""
    return json.dumps(to_plain(data), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def append_jsonl(path: str | Path, record: Any) -> None:
    """Append one compact JSON line and flush it to disk."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    line = json.dumps(to_plain(record), sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    with path.open("a", encoding="utf-8") as fh:
        fh.write(line + "\n")
        fh.flush()


def read_jsonl(path: str | Path) -> list[dict]:
    path = Path(path)
    if not path.exists():
        return []
    with path.open(encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]
