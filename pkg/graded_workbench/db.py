import hashlib
import json
from datetime import datetime, timezone

from sqlite_utils import Database


def witness_key(e: int, r: int, betti_entries: list) -> str:
    """Dedup key of a search hit: codimension, reduction number and Betti table."""
    payload = json.dumps({"e": e, "r": r, "betti": sorted(betti_entries)}, sort_keys=True)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:24]


class WitnessDB:
    def __init__(self, db_path: str):
        """Open the witness index and make sure its table exists."""
        self.db = Database(db_path)
        self._ensure_tables()

    def _ensure_tables(self):
        if "witnesses" not in self.db.table_names():
            # pyrefly: ignore [missing-attribute]
            self.db["witnesses"].create({
                "key": str,
                "e": int,
                "r": int,
                "betti": str,  # JSON list of [i, j, value]
                "cwl": int,  # 1 componentwise linear, 0 not
                "forms": str,  # JSON list of the parametrizing forms
                "seed": int,
                "found_at": str
            }, pk="key")
            # pyrefly: ignore [missing-attribute]
            self.db["witnesses"].create_index(["e", "r"])

    def has_witness(self, key: str) -> bool:
        return self.db.execute("SELECT 1 FROM witnesses WHERE key = ?", [key]).fetchone() is not None

    def add_witness(self, e: int, r: int, betti_entries: list, cwl: bool, forms: list[str], seed: int) -> str | None:
        """Record a witness unless an equal (e, r, Betti table) is already stored.

        Returns the new key, or None for a duplicate or a failed write.
        """
        key = witness_key(e, r, betti_entries)
        if self.has_witness(key):
            return None
        row = {
            "key": key,
            "e": e,
            "r": r,
            "betti": json.dumps(sorted(betti_entries)),
            "cwl": 1 if cwl else 0,
            "forms": json.dumps(forms),
            "seed": seed,
            "found_at": datetime.now(timezone.utc).isoformat()
        }
        try:
            # pyrefly: ignore [missing-attribute]
            self.db["witnesses"].insert(row)
            return key
        except Exception:
            return None

    def get_witness(self, key: str) -> dict | None:
        rows = list(self.db["witnesses"].rows_where("key = ?", [key], limit=1))
        return rows[0] if rows else None

    def get_witnesses(self, e: int | None = None, r: int | None = None, limit: int = 100) -> list[dict]:
        """Witnesses, newest first, optionally filtered by codimension and reduction number."""
        where = []
        params: list = []
        if e is not None:
            where.append("e = ?")
            params.append(e)
        if r is not None:
            where.append("r = ?")
            params.append(r)
        return list(self.db["witnesses"].rows_where(
            " AND ".join(where) or None, params, order_by="found_at desc", limit=limit
        ))

    def count_by_cwl(self) -> dict[str, int]:
        query = """
            SELECT cwl, COUNT(*) as n
            FROM witnesses
            GROUP BY cwl
        """
        counts = {"componentwise_linear": 0, "not_componentwise_linear": 0}
        for row in self.db.query(query):
            label = "componentwise_linear" if row["cwl"] else "not_componentwise_linear"
            counts[label] = row["n"]
        return counts
