const a = 1;
let b = 2;
var c = 3;
const d = 4, e = 5;
