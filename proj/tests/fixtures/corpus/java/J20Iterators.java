package demo;

import java.util.Iterator;
import java.util.List;

class J20Iterators {
    int count(List<String> xs) {
        int n = 0;
        Iterator<String> it = xs.iterator();
        while (it.hasNext()) {
            it.next();
            n++;
        }
        do {
            n--;
        } while (n > 100);
        return n;
    }
}
