#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <vector>

namespace gather::geom {

// Exact rational scalar. All geometry in this project is carried out over Q
// so that collinearity and obstruction tests are decidable and runs replay
// bit-for-bit.
using Scalar = mpq_class;

// mpq_class(n, d) does not reduce to lowest terms, but GMP's comparisons and
// arithmetic require canonical operands. Every fraction built from non-coprime
// parts must go through here.
inline Scalar frac(long n, long d) {
  Scalar s(n, d);
  s.canonicalize();
  return s;
}

struct Point {
  Scalar x;
  Scalar y;

  Point() = default;
  Point(Scalar px, Scalar py) : x(std::move(px)), y(std::move(py)) {}

  friend bool operator==(const Point& a, const Point& b) {
    return a.x == b.x && a.y == b.y;
  }
  friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }
  // Lexicographic order, used for canonical starting vertices and tiebreaks.
  friend bool operator<(const Point& a, const Point& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  }

  friend Point operator+(const Point& a, const Point& b) {
    return {a.x + b.x, a.y + b.y};
  }
  friend Point operator-(const Point& a, const Point& b) {
    return {a.x - b.x, a.y - b.y};
  }
  friend Point operator*(const Scalar& s, const Point& p) {
    return {s * p.x, s * p.y};
  }
};

Scalar dist2(const Point& a, const Point& b);

// Line a*x + b*y + c = 0 in canonical form: first nonzero of (a,b) positive,
// coefficients integral and coprime. Equal lines have equal fields.
struct Line {
  Scalar a, b, c;

  static Line through(const Point& p, const Point& q);
  // Line through p with direction vector d (d != 0).
  static Line with_direction(const Point& p, const Point& dir);

  Scalar eval(const Point& p) const { return a * p.x + b * p.y + c; }
  bool contains(const Point& p) const { return eval(p) == 0; }
  bool parallel_to(const Line& o) const { return a * o.b - b * o.a == 0; }

  // Squared distance from p to this line (rational).
  Scalar dist2_to(const Point& p) const;

  friend bool operator==(const Line& l, const Line& m) {
    return l.a == m.a && l.b == m.b && l.c == m.c;
  }
  friend bool operator<(const Line& l, const Line& m) {
    if (l.a != m.a) return l.a < m.a;
    if (l.b != m.b) return l.b < m.b;
    return l.c < m.c;
  }
};

struct HalfPlane {
  Line boundary;
  int side;     // +1 or -1: sign of boundary.eval(p) for members
  bool closed;

  bool contains(const Point& p) const {
    Scalar v = boundary.eval(p);
    int s = sgn(v);
    if (s == 0) return closed;
    return s == side;
  }
};

// Convex hull: corner vertices in CCW order starting at the lexicographic
// minimum, plus the input points that lie on edges strictly between corners.
// Degenerate forms: single point (1 vertex), segment (2 vertices).
struct Hull {
  std::vector<Point> vertices;
  std::vector<Point> boundary_points;

  bool contains_vertex(const Point& p) const;
  bool on_boundary(const Point& p) const;  // vertex or boundary point
  // Strictly inside the hull region (not on the boundary polyline).
  bool strictly_inside(const Point& p) const;
  bool is_linear() const { return vertices.size() <= 2; }

  // Hull neighbours of corner vertex p (the two adjacent corners).
  std::pair<Point, Point> corner_neighbours(const Point& p) const;
};

struct LayerDecomposition {
  std::vector<Hull> layers;  // index 0 = outermost
};

enum class Kind { Corner, Boundary, Interior };

struct Classification {
  Kind kind;
};

struct DegenerateHull : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sign of the cross product (b-a) x (c-a): +1 left turn, -1 right, 0 collinear.
int orientation(const Point& a, const Point& b, const Point& c);

// True iff p lies strictly between a and b on segment ab.
bool strictly_between(const Point& a, const Point& p, const Point& b);

bool all_collinear(const std::vector<Point>& pts);

Hull convex_hull(const std::vector<Point>& pts);
LayerDecomposition convex_layers(const std::vector<Point>& pts);

// Corner / boundary / interior classification of p within `visible`
// (p must be a member). Singleton set classifies as Corner; endpoints of a
// collinear set are Corner, its middle points Boundary.
Classification classify(const Point& p, const std::vector<Point>& visible);

// Observer plus every q with no third occupied point strictly between them.
// Collocated points are mutually visible.
std::vector<Point> visible_set(const Point& observer,
                               const std::vector<Point>& occupied);

// Arithmetic mean of the distinct corner vertices of convex_hull(pts).
Point center_of_gravity(const std::vector<Point>& pts);

// Target point strictly inside the triangle (r, mid1, mid2) of the edges to
// r's hull neighbours such that r stays a hull corner after the move and sees
// every stationary occupied point. Throws DegenerateHull for hulls with fewer
// than 3 vertices. The corner condition is evaluated against `hull_members`
// (the points the hull was built from), which may be a subset of `occupied`
// when the caller's hull ignores some robots.
Point int_visible_area(const Point& r, const Hull& hull,
                       const std::vector<Point>& occupied);
Point int_visible_area(const Point& r, const Hull& hull,
                       const std::vector<Point>& occupied,
                       const std::vector<Point>& hull_members);

// Target on segment r--chosen_mid with 0 < d(r,t)^2 <= 1/4 * min over the
// blocking-line sets S^2, S^3 of d(r,L)^2 (lines through r excluded).
// Singleton hulls move toward the nearest other occupied point.
Point boundary_visible_area(const Point& r, const Hull& hull,
                            const std::vector<Point>& occupied,
                            const Point& chosen_mid);

// The interior construction reflected across the line through r parallel to
// mid1--mid2; lands strictly outside the hull, keeps r a corner, and grants
// visibility of all stationary occupied points.
Point ext_visible_area(const Point& r, const Hull& hull,
                       const std::vector<Point>& occupied);

}  // namespace gather::geom
