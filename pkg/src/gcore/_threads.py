import os


def thread_count() -> int:
    """Worker threads for internal fan-out, from ``GCORE_THREADS`` (0 or unset: one per CPU)."""
    raw = os.environ.get("GCORE_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError as exc:
        raise ValueError(f"GCORE_THREADS must be an integer, got {raw!r}") from exc
    if n < 0:
        raise ValueError(f"GCORE_THREADS must be >= 0, got {n}")
    return n or (os.cpu_count() or 1)
