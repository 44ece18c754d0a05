package core;

public class Point {
    private int x;
    private int y;
    private int z;
}
