"""Round-trip reader for the CSV files the command-line driver emits."""


def read_table(path):
    """Returns (header, rows, trailing_comments); rows are lists of strings."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line.rstrip("\n") for line in fh]
    assert lines, f"{path} is empty"
    header = lines[0].split(",")
    rows = []
    comments = []
    for line in lines[1:]:
        if line.startswith("#"):
            comments.append(line)
        else:
            rows.append(line.split(","))
    for row in rows:
        assert len(row) == len(header), f"ragged row in {path}: {row}"
    return header, rows, comments


def assert_floats_round_trip(fields):
    """Each rendered float must reparse to the double that produced it."""
    for text in fields:
        if text == "":
            continue
        value = float(text)
        assert f"{value:.17g}" == text, f"field {text!r} does not round-trip"


def column(header, rows, name):
    idx = header.index(name)
    return [row[idx] for row in rows]
