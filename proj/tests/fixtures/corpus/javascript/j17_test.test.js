describe("math", () => {
  it("adds", () => {
    const result = 1 + 1;
    expect(result).toBe(2);
  });
});
