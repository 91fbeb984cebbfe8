enum Direction {
  Up = "UP",
  Down = "DOWN",
}

const enum Flags {
  None = 0,
  Read = 1,
}

let d: Direction = Direction.Up;
