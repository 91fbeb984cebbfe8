// Minimal chart renderer embedded in reports when no frontend bundle is
// configured. Draws one SVG line chart per metric from the JSON payload.
(function () {
  "use strict";
  var SVG = "http://www.w3.org/2000/svg";
  var COLORS = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"];

  function el(name, attrs, text) {
    var node = document.createElementNS(SVG, name);
    for (var k in attrs) node.setAttribute(k, attrs[k]);
    if (text !== undefined) node.textContent = text;
    return node;
  }

  function draw(slot, metric, boundaries) {
    var body = slot.querySelector(".chart-body");
    body.textContent = "";
    var w = 640, h = 260, left = 56, right = 16, top = 12, bottom = 36;
    var max = 0;
    metric.series.forEach(function (s) {
      s.values.forEach(function (v) { if (v > max) max = v; });
    });
    if (max === 0) max = 1;
    var n = boundaries.length;
    var x = function (i) { return left + (n < 2 ? 0 : i * (w - left - right) / (n - 1)); };
    var y = function (v) { return h - bottom - v * (h - top - bottom) / max; };
    var svg = el("svg", { viewBox: "0 0 " + w + " " + h, width: "100%", role: "img" });
    svg.appendChild(el("line", { x1: left, y1: h - bottom, x2: w - right, y2: h - bottom, stroke: "#999" }));
    svg.appendChild(el("line", { x1: left, y1: top, x2: left, y2: h - bottom, stroke: "#999" }));
    svg.appendChild(el("text", { x: left - 6, y: top + 4, "text-anchor": "end", "font-size": 11 }, String(max)));
    svg.appendChild(el("text", { x: left - 6, y: h - bottom, "text-anchor": "end", "font-size": 11 }, "0"));
    boundaries.forEach(function (b, i) {
      if (n > 12 && i % Math.ceil(n / 12) !== 0) return;
      svg.appendChild(el("text", { x: x(i), y: h - bottom + 16, "text-anchor": "middle", "font-size": 10 }, b));
    });
    var legend = document.createElement("ul");
    legend.className = "legend";
    metric.series.forEach(function (s, k) {
      var color = COLORS[k % COLORS.length];
      var pts = s.values.map(function (v, i) { return x(i) + "," + y(v); }).join(" ");
      svg.appendChild(el("polyline", { points: pts, fill: "none", stroke: color, "stroke-width": 2 }));
      s.values.forEach(function (v, i) {
        var dot = el("circle", { cx: x(i), cy: y(v), r: 3, fill: color });
        dot.appendChild(el("title", {}, s.label + " @ " + boundaries[i] + ": " + v));
        svg.appendChild(dot);
      });
      var item = document.createElement("li");
      item.style.color = color;
      item.textContent = s.label;
      legend.appendChild(item);
    });
    body.appendChild(svg);
    if (metric.kind === "Categorical") body.appendChild(legend);
  }

  function render() {
    var data = document.getElementById("report-data");
    var slots = document.querySelectorAll("section.chart");
    var payload;
    try {
      payload = JSON.parse(data.textContent);
      if (!Array.isArray(payload.metrics) || !Array.isArray(payload.boundaries)) throw new Error("bad payload");
    } catch (e) {
      var banner = document.createElement("p");
      banner.className = "error-banner";
      banner.textContent = "Report data could not be read: " + e.message;
      document.body.insertBefore(banner, document.body.firstChild);
      return 0;
    }
    payload.metrics.forEach(function (metric, i) {
      if (slots[i]) draw(slots[i], metric, payload.boundaries);
    });
    return payload.metrics.length;
  }

  if (document.readyState === "loading") document.addEventListener("DOMContentLoaded", render);
  else render();
})();
