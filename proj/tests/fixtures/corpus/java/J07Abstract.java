package demo;

public abstract class J07Abstract {
    protected abstract double area();

    public String describe() {
        return "area=" + area();
    }
}
