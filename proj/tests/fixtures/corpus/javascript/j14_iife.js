(function () {
  var hidden = 42;
  const reveal = () => hidden;
  window.reveal = reveal;
})();
