#pragma once

#include <cstddef>
#include <deque>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

namespace stringmom::replica {

/// +1 marks a profitable long, -1 a loss.
using Spin = int;

/// sgn(bid at close - ask at open); an exact tie counts as a loss.
Spin spin_from_trade(double bid_at_close, double ask_at_open);

/// One stored string state: d_X + 1 coordinate components, each sampled at
/// h = 0..h_op, plus its spin.
struct Replica {
	std::vector<std::vector<double>> coords;
	Spin spin = -1;
};

/// Coordinates from the conjugate end-point map of the bid window (component
/// 0) and the ask window (component 1); both spans hold h_op + 1 prices.
Replica make_replica(std::span<const double> bids, std::span<const double> asks, double q, Spin spin = -1);

/**
 * D = [ 1/(d_X h_op) * sum_{h=0}^{h_op} sum_{j=0}^{d_X} |X_j^a(h) - X_j^b(h)|^p ]^(1/p)
 *
 * The prefactor is kept as written although the double sum has
 * (h_op + 1)(d_X + 1) terms; it is a constant scale and does not affect the
 * weights, which only see D relative to its mean.
 */
double hilbert_distance(const Replica& a, const Replica& b, double p, std::size_t h_op, std::size_t d_x);

double mean_distance(std::span<const double> distances);

/// w_n = exp(-c_D D_n / mean(D)) / sum_n' exp(-c_D D_n' / mean(D)); uniform when
/// every distance is zero.
std::vector<double> boltzmann_weights(std::span<const double> distances, double c_d);

struct ReplicaGeometry {
	std::size_t h_op = 50;
	std::size_t h_cl = 100;
	std::size_t d_x = 1;
	double p = 2.0;
	double c_d = 1.0;
};

/**
 * Fixed-size replica store indexed n = 0..N, oldest first.
 *
 * Only replicas 0..N_red with N_red = N - (h_cl - h_op) enter predictions;
 * the newest h_cl - h_op have not reached their close quote yet.
 */
class ReplicaSystem {
public:
	ReplicaSystem(ReplicaGeometry geometry, std::vector<Replica> initial);

	const ReplicaGeometry& geometry() const { return geometry_; }
	std::size_t size() const { return store_.size(); }
	std::size_t last_index() const { return store_.size() - 1; }
	/// N_red, or -1 when the store is too small to predict.
	std::ptrdiff_t reduced_index() const;
	const Replica& operator[](std::size_t n) const { return store_[n]; }

	/// X^(n) <- X^(n+1), S^(n) <- S^(n+1) for n < N, X^(N) <- fresh; the old
	/// X^(0) is discarded.
	void shift(Replica fresh);
	void set_spin(std::size_t n, Spin spin);

	/// Weighted spin of the replicas 0..N_red against `probe`, in [-1, 1].
	double fuzzy_spin(const Replica& probe) const;
	std::vector<double> distances(const Replica& probe) const;

private:
	void check_shape(const Replica& r) const;

	ReplicaGeometry geometry_;
	std::deque<Replica> store_;
};

inline void shift_replicas(ReplicaSystem& system, Replica fresh) {
	system.shift(std::move(fresh));
}

inline double fuzzy_spin(const ReplicaSystem& system, const Replica& probe) {
	return system.fuzzy_spin(probe);
}

struct SpinTrade {
	std::size_t interval = 0; // h_cl - h_op
	Spin spin = -1;
};

/// Per-class counts over interval bins, each class scaled by its own maximum.
struct SpinHistograms {
	std::size_t bin_width = 1;
	std::map<std::size_t, std::size_t> plus_counts;
	std::map<std::size_t, std::size_t> minus_counts;
	std::map<std::size_t, double> plus;
	std::map<std::size_t, double> minus;
};

SpinHistograms spin_histograms(std::span<const SpinTrade> trades, std::size_t bin_width = 1);

void write_spin_histogram_csv(std::ostream& out, const SpinHistograms& hist);

} // namespace stringmom::replica
