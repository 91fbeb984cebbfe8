for (let i = 0; i < 10; i++) {
  const sq = i * i;
  console.log(sq);
}
for (var j = 0; j < 3; j++) {}
for (const k of [1, 2]) {
  console.log(k);
}
