package core;

// A circle defined by its radius.
public class Circle extends AbstractShape {
    private double radius;

    public Circle(String name, double radius) {
        super(name);
        this.radius = radius;
    }

    public double area() {
        return 3.14159 * radius * radius;
    }

    public double perimeter() {
        return 2.0 * 3.14159 * radius;
    }

    public double scaled(double factor) {
        // Negative factors flip to zero.
        return factor > 0.0 ? radius * factor : 0.0;
    }
}
