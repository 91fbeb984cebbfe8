def no_args():
    pass


def many(a, b=1, *args, c, d=2, **kwargs):
    return (a, b, args, c, d, kwargs)


def typed(x: int, y: str = "") -> None:
    return None
