package demo;

class J11SyntaxError {
    void broken( {
        int x = ;
    }

    void fine() {}
}
