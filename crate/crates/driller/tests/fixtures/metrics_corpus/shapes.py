import os

LIMIT = 10


def area(width, height=1):
    """Rectangle area.

    Spans several lines.
    """
    return width * height


def classify(values, threshold=LIMIT, *args, **kwargs):
    # leading comment
    result = []
    for v in values:
        if v > threshold and v % 2 == 0:
            result.append("big-even")
        elif v > threshold or v < -threshold:
            result.append("big")
        else:
            result.append("small")
    return result


class Walker:
    def __init__(self, root):
        self.root = root

    def walk(self, pattern: str, depth: int = 3) -> list:
        found = [p for p in os.listdir(self.root) if p.endswith(pattern)]
        while depth > 0:
            depth -= 1
        try:
            os.stat(self.root)
        except OSError:
            return []
        return found


def outer(items):
    def keep(item):
        return item is not None and item != ""
    '''
    standalone string
    '''
    return [i for i in items if keep(i)]


def dispatch(command):
    match command:
        case "start":
            return 1
        case "stop":
            return 2
        case _:
            return 0
