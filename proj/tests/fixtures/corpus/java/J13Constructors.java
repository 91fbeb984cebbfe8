package demo;

public class J13Constructors {
    private final String name;

    public J13Constructors() {
        this("default");
    }

    public J13Constructors(String name) {
        this.name = name;
    }

    public String name() {
        return name;
    }
}
