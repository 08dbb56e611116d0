"""Fixed text formatting shared by every CSV writer."""


def fmt(x):
    """17 significant digits; round-trips any double exactly."""
    if x is None:
        return ""
    if isinstance(x, (int,)) and not isinstance(x, bool):
        return str(x)
    return f"{float(x):.17g}"


def header_lines(pairs):
    return "".join(f"# {k}={v}\n" for k, v in pairs)
