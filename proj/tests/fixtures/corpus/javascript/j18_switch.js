function label(kind) {
  switch (kind) {
    case "a": {
      const x = "alpha";
      return x;
    }
    default:
      return "other";
  }
}
