package app;

public class Sprite {
    private int x;
    private int y;
    private int z;
}
