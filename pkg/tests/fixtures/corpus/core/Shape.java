package core;

// Common contract for planar shapes.
public interface Shape {
    // Enclosed area.
    double area();

    // Boundary length.
    double perimeter();
}
