#include "dgrod/quadrature.hpp"

#include "dgrod/error.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace dgrod {

namespace {

// Orbit of barycentric points with weight given for a unit-area triangle.
struct Orbit {
  int multiplicity;  // 1, 3 or 6
  double a;
  double b;
  double weight;
};

struct Builder {
  std::vector<std::array<double, 2>> pts;
  std::vector<double> wts;

  void add(const Orbit& o) {
    const double w = 0.5 * o.weight;
    if (o.multiplicity == 1) {
      push(1.0 / 3.0, 1.0 / 3.0, w);
    } else if (o.multiplicity == 3) {
      const double c = 1.0 - 2.0 * o.a;
      push(o.a, o.a, w);
      push(o.a, c, w);
      push(c, o.a, w);
    } else {
      const double c = 1.0 - o.a - o.b;
      push(o.a, o.b, w);
      push(o.b, o.a, w);
      push(o.a, c, w);
      push(c, o.a, w);
      push(o.b, c, w);
      push(c, o.b, w);
    }
  }

  void push(double xi, double eta, double w) {
    pts.push_back({xi, eta});
    wts.push_back(w);
  }

  QuadratureRule finish(int degree) const {
    QuadratureRule rule;
    rule.points.resize(static_cast<Eigen::Index>(pts.size()), 2);
    rule.weights.resize(static_cast<Eigen::Index>(wts.size()));
    for (std::size_t i = 0; i < pts.size(); ++i) {
      rule.points(static_cast<Eigen::Index>(i), 0) = pts[i][0];
      rule.points(static_cast<Eigen::Index>(i), 1) = pts[i][1];
      rule.weights(static_cast<Eigen::Index>(i)) = wts[i];
    }
    rule.exactness_degree = degree;
    return rule;
  }
};

// Dunavant's symmetric rules (positive, interior ones only).
std::vector<Orbit> dunavant_orbits(int degree) {
  switch (degree) {
    case 1: return {{1, 0, 0, 1.0}};
    case 2: return {{3, 1.0 / 6.0, 0, 1.0 / 3.0}};
    case 4:
      return {{3, 0.44594849091596488631832925388305, 0, 0.22338158967801146569500700843312},
              {3, 0.09157621350977074345957146340220, 0, 0.10995174365532186763832632490021}};
    case 5:
      return {{1, 0, 0, 0.225},
              {3, 0.47014206410511508977044120951345, 0, 0.13239415278850618073764938783315},
              {3, 0.10128650732345633880098736191512, 0, 0.12593918054482715259568394550018}};
    case 6:
      return {{3, 0.24928674517091042129163855310702, 0, 0.11678627572637936602528961138558},
              {3, 0.06308901449150222834033160287082, 0, 0.05084490637020681692093680910686},
              {6, 0.31035245103378440541660773395655, 0.05314504984481694735324967163139,
               0.08285107561837357519355345642044}};
    case 8:
      return {{1, 0, 0, 0.14431560767778716825109111048906},
              {3, 0.45929258829272315602881551449417, 0, 0.09509163426728462479389610438858},
              {3, 0.17056930775176020662229350149146, 0, 0.10321737053471825028179155029212},
              {3, 0.05054722831703097545842355059660, 0, 0.03245849762319808031092592834178},
              {6, 0.26311282963463811342178578628464, 0.00839477740995760533721383453929,
               0.02723031417443499426484469007390}};
    case 9:
      return {{1, 0, 0, 0.09713579628279609890744676309485},
              {3, 0.48968251919873762778370692483619, 0, 0.03133470022713983234393199080984},
              {3, 0.43708959149293663726993036443535, 0, 0.07782754100477543338465495857972},
              {3, 0.18820353561903273024096128046733, 0, 0.07964773892720910288013526957424},
              {3, 0.04472951339445297061024247196780, 0, 0.02557767565869810438673914467637},
              {6, 0.22196298916076569567510252769319, 0.03683841205473628363481759878339,
               0.04328353937728937728937728937729}};
    case 10:
      return {{1, 0, 0, 0.090817990382754},
              {3, 0.485577633383657, 0, 0.036725957756467},
              {3, 0.109481575485037, 0, 0.045321059435528},
              {6, 0.141707219414880, 0.307939838764121, 0.072757916845420},
              {6, 0.025003534762686, 0.246672560639903, 0.028327242531057},
              {6, 0.009540815400299, 0.066803251012200, 0.009421666963733}};
    case 12:
      return {{3, 0.488217389773805, 0, 0.025731066440455},
              {3, 0.439724392294460, 0, 0.043692544538038},
              {3, 0.271210385012116, 0, 0.062858224217885},
              {3, 0.127576145541586, 0, 0.034796112930709},
              {3, 0.021317350453210, 0, 0.006166261051559},
              {6, 0.115343494534698, 0.275713269685514, 0.040371557766381},
              {6, 0.022838332222257, 0.281325580989940, 0.022356773202303},
              {6, 0.025734050548330, 0.116251915907597, 0.017316231108659}};
    default: return {};
  }
}

// Degrees 3, 7 and 11 have a negative weight or exterior points in the
// classical table; use the next positive interior rule.
int tabulated_degree(int degree) {
  switch (degree) {
    case 3: return 4;
    case 7: return 8;
    case 11: return 12;
    default: return degree;
  }
}

QuadratureRule make_volume_rule(int degree) {
  Builder b;
  const int tab = tabulated_degree(degree);
  for (const Orbit& o : dunavant_orbits(tab)) b.add(o);
  return b.finish(tab);
}

QuadratureRule make_gauss_legendre(int n) {
  QuadratureRule rule;
  rule.points = Eigen::MatrixX2d::Zero(n, 2);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton on P_n starting from the Chebyshev-like guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Map [-1, 1] to [0, 1]; ascending order.
    rule.points(n - 1 - i, 0) = 0.5 * (x + 1.0);
    rule.weights(n - 1 - i) = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  rule.exactness_degree = 2 * n - 1;
  return rule;
}

}  // namespace

const QuadratureRule& volume_quadrature(int degree) {
  if (degree < 1 || degree > kMaxVolumeDegree)
    throw Error(ErrorCode::InvalidArgument,
                "volume quadrature degree " + std::to_string(degree) + " unsupported (1..12)");
  static const std::array<QuadratureRule, kMaxVolumeDegree> rules = [] {
    std::array<QuadratureRule, kMaxVolumeDegree> r;
    for (int d = 1; d <= kMaxVolumeDegree; ++d) r[d - 1] = make_volume_rule(d);
    return r;
  }();
  return rules[degree - 1];
}

const QuadratureRule& edge_quadrature(int n) {
  if (n < 1 || n > kMaxEdgePoints)
    throw Error(ErrorCode::InvalidArgument,
                "edge quadrature with " + std::to_string(n) + " points unsupported (1..10)");
  static const std::array<QuadratureRule, kMaxEdgePoints> rules = [] {
    std::array<QuadratureRule, kMaxEdgePoints> r;
    for (int k = 1; k <= kMaxEdgePoints; ++k) r[k - 1] = make_gauss_legendre(k);
    return r;
  }();
  return rules[n - 1];
}

}  // namespace dgrod
