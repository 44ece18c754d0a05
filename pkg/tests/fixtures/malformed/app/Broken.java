package app;

public class Broken {
    void oops(String... args) {
    }
}
