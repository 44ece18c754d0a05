package app;

public class Good {
    private int x;
    private int y;
    private int z;
}
