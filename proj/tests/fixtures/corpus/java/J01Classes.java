package demo;

public class J01Classes {
    private int count;

    public int getCount() {
        return count;
    }

    public void increment() {
        count++;
    }
}
