const greeting = "héllo wörld";
let λ = (x) => x;
var emoji = "🎉";
