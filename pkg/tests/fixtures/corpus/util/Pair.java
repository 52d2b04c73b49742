package util;

// Two ints with fully cohesive accessors.
public class Pair {
    private int first;
    private int second;

    public int sum() {
        return first + second;
    }

    public int max() {
        if (first > second) {
            return first;
        }
        return second;
    }

    public void swap() {
        int keep = first;
        first = second;
        second = keep;
    }
}
