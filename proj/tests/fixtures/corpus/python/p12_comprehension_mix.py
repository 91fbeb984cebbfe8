words = ["alpha", "beta", "gamma"]
lengths = {w: len(w) for w in words}
initials = {w[0] for w in words}
upper = [w.upper() for w in words]
lazy = (w for w in words if w)
