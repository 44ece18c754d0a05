package shop;

public class Customer {
    private String name;
    private String street;
    private String city;
    private String zip;
}
