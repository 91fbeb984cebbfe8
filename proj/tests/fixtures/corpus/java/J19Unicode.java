package demo;

class J19Unicode {
    String greeting = "héllo wörld";
    // ünïcödé
    int λ() {
        return 1;
    }
}
