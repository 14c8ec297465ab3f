"""Plain-text Betti tables: rows j, columns i, an en dash for zero."""

from typing import Protocol

EMPTY = "–"


class _Table(Protocol):
    entries: dict

    def __getitem__(self, key: tuple[int, int]) -> int: ...


def render_betti_table(table: _Table) -> str:
    """Render a Betti table in the usual layout, ending with a newline."""
    entries = table.entries
    pdim = max((i for i, _ in entries), default=0)
    reg = max((j for _, j in entries), default=0)
    col_labels = [str(i) for i in range(pdim + 1)]
    row_labels = [str(j) for j in range(reg + 1)]
    cells = [[str(table[(i, j)]) if table[(i, j)] else EMPTY for i in range(pdim + 1)] for j in range(reg + 1)]

    label_w = max(len(s) for s in row_labels)
    cell_w = max([len(s) for s in col_labels] + [len(c) for row in cells for c in row])

    header = " " * label_w + " |" + "".join(" " + c.rjust(cell_w) for c in col_labels)
    separator = "-" * label_w + "-+" + "-" * (len(header) - label_w - 2)
    lines = [header, separator]
    for label, row in zip(row_labels, cells):
        lines.append(label.rjust(label_w) + " |" + "".join(" " + c.rjust(cell_w) for c in row))
    return "\n".join(lines) + "\n"


def parse_betti_table(text: str) -> dict[tuple[int, int], int]:
    """Inverse of render_betti_table; returns the nonzero entries."""
    lines = [line for line in text.splitlines() if line.strip()]
    if len(lines) < 2:
        raise ValueError("a Betti table needs a header and a separator")
    columns = [int(c) for c in lines[0].split("|", 1)[1].split()]
    entries: dict[tuple[int, int], int] = {}
    for line in lines[2:]:
        label, _, body = line.partition("|")
        j = int(label)
        cells = body.split()
        if len(cells) != len(columns):
            raise ValueError(f"row {j} has {len(cells)} cells, expected {len(columns)}")
        for i, cell in zip(columns, cells):
            if cell not in (EMPTY, "-", "0"):
                entries[(i, j)] = int(cell)
    return entries
