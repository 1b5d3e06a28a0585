#include "stringmom/spin_replica.hpp"
#include "stringmom/string_core.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

using namespace stringmom::replica;

namespace {

Replica constant_replica(std::size_t h_op, double v0, double v1, Spin spin) {
	return Replica{{std::vector<double>(h_op + 1, v0), std::vector<double>(h_op + 1, v1)}, spin};
}

Replica random_replica(std::mt19937_64& rng, std::size_t h_op, Spin spin = 1) {
	std::uniform_real_distribution<double> u(0.0, 1.0);
	Replica r;
	r.spin = spin;
	for (int j = 0; j < 2; ++j) {
		std::vector<double> c(h_op + 1);
		for (auto& x : c) {
			x = u(rng);
		}
		r.coords.push_back(c);
	}
	return r;
}

ReplicaGeometry small_geometry() {
	ReplicaGeometry g;
	g.h_op = 2;
	g.h_cl = 4;
	return g;
}

} // namespace

TEST(Spin, FromTrade) {
	EXPECT_EQ(spin_from_trade(1.3010, 1.3000), 1);
	EXPECT_EQ(spin_from_trade(1.2990, 1.3000), -1);
	EXPECT_EQ(spin_from_trade(1.3000, 1.3000), -1);
	EXPECT_THROW(spin_from_trade(0.0, 1.3), std::invalid_argument);
}

TEST(HilbertDistance, WorkedValue) {
	Replica a{{{3.0, 0.0, 0.0}, {3.0, 0.0, 0.0}}, 1};
	Replica b{{{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}}, 1};
	// (9 + 9) / (1 * 2) = 9.
	EXPECT_NEAR(hilbert_distance(a, b, 2.0, 2, 1), 3.0, 1e-15);
	EXPECT_NEAR(hilbert_distance(a, b, 1.0, 2, 1), 3.0, 1e-15);
	EXPECT_NEAR(hilbert_distance(a, b, 3.0, 2, 1), std::cbrt(27.0), 1e-12);
	EXPECT_THROW(hilbert_distance(a, b, 0.5, 2, 1), std::invalid_argument);
	EXPECT_THROW(hilbert_distance(a, b, 2.0, 3, 1), std::invalid_argument);
}

TEST(HilbertDistance, MetricProperties) {
	std::mt19937_64 rng(4);
	for (int trial = 0; trial < 200; ++trial) {
		const auto a = random_replica(rng, 6);
		const auto b = random_replica(rng, 6);
		const auto c = random_replica(rng, 6);
		for (double p : {1.0, 2.0, 3.5}) {
			EXPECT_EQ(hilbert_distance(a, a, p, 6, 1), 0.0);
			EXPECT_DOUBLE_EQ(hilbert_distance(a, b, p, 6, 1), hilbert_distance(b, a, p, 6, 1));
			EXPECT_LE(hilbert_distance(a, c, p, 6, 1),
			          hilbert_distance(a, b, p, 6, 1) + hilbert_distance(b, c, p, 6, 1) + 1e-12);
		}
	}
}

TEST(BoltzmannWeights, Normalization) {
	std::mt19937_64 rng(9);
	std::uniform_real_distribution<double> u(0.0, 5.0);
	for (int trial = 0; trial < 100; ++trial) {
		std::vector<double> d(1 + trial % 30);
		for (auto& x : d) {
			x = u(rng);
		}
		for (double c : {0.0, 0.5, 1.0, 40.0}) {
			const auto w = boltzmann_weights(d, c);
			EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12);
			if (c == 0.0) {
				for (double wi : w) {
					EXPECT_NEAR(wi, 1.0 / static_cast<double>(d.size()), 1e-15);
				}
			}
		}
	}
	const std::vector<double> zeros(4, 0.0);
	for (double wi : boltzmann_weights(zeros, 1.0)) {
		EXPECT_EQ(wi, 0.25);
	}
	EXPECT_THROW(boltzmann_weights({}, 1.0), std::invalid_argument);
}

TEST(BoltzmannWeights, TwoReplicaExample) {
	const std::vector<double> d{1.0, 3.0};
	const auto w = boltzmann_weights(d, 1.0);
	const double w0 = 1.0 / (1.0 + std::exp(-1.0));
	EXPECT_NEAR(w[0], w0, 1e-12);
	EXPECT_NEAR(w[0], 0.7311, 1e-4);
	EXPECT_NEAR(w[0] - w[1], 0.4621, 1e-4);
}

TEST(ReplicaSystem, FuzzySpinExample) {
	ReplicaGeometry g = small_geometry();
	g.h_cl = 3; // N_red = N - 1
	g.p = 1.0;
	// Probe at 0, replicas at constant offsets 1 and 3 in both components.
	std::vector<Replica> init{constant_replica(2, 1.0, 1.0, 1), constant_replica(2, 3.0, 3.0, -1),
	                          constant_replica(2, 9.0, 9.0, -1)};
	const ReplicaSystem sys(g, init);
	EXPECT_EQ(sys.reduced_index(), 1);
	const auto probe = constant_replica(2, 0.0, 0.0, 1);
	const auto d = sys.distances(probe);
	ASSERT_EQ(d.size(), 2u);
	EXPECT_NEAR(d[0], 3.0, 1e-15); // 6 terms of 1 over d_X h_op = 2
	EXPECT_NEAR(d[1], 9.0, 1e-15);
	// Exponents -0.5 and -1.5.
	EXPECT_NEAR(sys.fuzzy_spin(probe), std::tanh(0.5), 1e-12);
	EXPECT_NEAR(fuzzy_spin(sys, probe), 0.4621, 1e-4);
}

TEST(ReplicaSystem, UnanimousSpins) {
	std::mt19937_64 rng(2);
	std::vector<Replica> init;
	for (int i = 0; i < 8; ++i) {
		init.push_back(random_replica(rng, 2, 1));
	}
	const ReplicaSystem sys(small_geometry(), init);
	EXPECT_NEAR(sys.fuzzy_spin(random_replica(rng, 2)), 1.0, 1e-12);
	std::vector<Replica> losers;
	for (int i = 0; i < 8; ++i) {
		losers.push_back(random_replica(rng, 2, -1));
	}
	const ReplicaSystem down(small_geometry(), losers);
	EXPECT_NEAR(down.fuzzy_spin(random_replica(rng, 2)), -1.0, 1e-12);
}

TEST(ReplicaSystem, ShiftSemantics) {
	std::vector<Replica> init;
	for (int i = 0; i < 5; ++i) {
		init.push_back(constant_replica(2, i, i, 1));
	}
	ReplicaSystem sys(small_geometry(), init);
	EXPECT_EQ(sys.reduced_index(), 2);
	sys.set_spin(0, -1);
	shift_replicas(sys, constant_replica(2, 5.0, 5.0, 1));
	EXPECT_EQ(sys.size(), 5u);
	for (std::size_t n = 0; n < 5; ++n) {
		EXPECT_EQ(sys[n].coords[0][0], static_cast<double>(n + 1));
		EXPECT_EQ(sys[n].spin, 1);
	}
	// A mark on the newest replica reaches index 0 after N shifts and is gone after N + 1.
	sys.set_spin(sys.last_index(), -1);
	for (std::size_t i = 0; i < sys.last_index(); ++i) {
		sys.shift(constant_replica(2, 10.0, 0.0, 1));
	}
	EXPECT_EQ(sys[0].spin, -1);
	sys.shift(constant_replica(2, 20.0, 0.0, 1));
	for (std::size_t n = 0; n < sys.size(); ++n) {
		EXPECT_EQ(sys[n].spin, 1);
	}
	EXPECT_EQ(sys[sys.last_index()].coords[0][0], 20.0);
	EXPECT_THROW(sys.set_spin(9, 1), std::out_of_range);
	EXPECT_THROW(sys.set_spin(0, 0), std::invalid_argument);
}

TEST(ReplicaSystem, Validation) {
	std::vector<Replica> two{constant_replica(2, 0, 0, 1), constant_replica(2, 0, 0, 1)};
	ReplicaGeometry g = small_geometry();
	const ReplicaSystem tiny(g, two);
	EXPECT_LT(tiny.reduced_index(), 0);
	EXPECT_THROW(tiny.fuzzy_spin(constant_replica(2, 0, 0, 1)), std::invalid_argument);
	g.h_cl = 2;
	EXPECT_THROW(ReplicaSystem(g, two), std::invalid_argument);
	EXPECT_THROW(ReplicaSystem(small_geometry(), {}), std::invalid_argument);
	std::vector<Replica> wrong{constant_replica(3, 0, 0, 1)};
	EXPECT_THROW(ReplicaSystem(small_geometry(), wrong), std::invalid_argument);
}

TEST(MakeReplica, UsesConjugateMapsOfBidAndAsk) {
	const std::vector<double> bids{1.0, 1.5, 2.0};
	const std::vector<double> asks{1.1, 1.6, 2.1};
	const auto r = make_replica(bids, asks, 1.0, 1);
	ASSERT_EQ(r.coords.size(), 2u);
	// P vanishes at both end points, so X is p1 spread over the running mean.
	const double p1 = std::abs((1.5 / 1.0 - 1.0) * (1.5 / 2.0 - 1.0));
	EXPECT_NEAR(r.coords[0][0], 0.0, 1e-15);
	EXPECT_NEAR(r.coords[0][1], p1 / 2.0, 1e-15);
	EXPECT_NEAR(r.coords[0][2], p1 / 3.0, 1e-15);
	EXPECT_EQ(r.coords[1], stringmom::strings::two_endpoint_maps(asks, 2, 1.0).conjugate);
	EXPECT_THROW(make_replica(bids, std::span(asks).first(2), 1.0), std::invalid_argument);
}

TEST(SpinHistograms, ScaledPerClass) {
	std::vector<SpinTrade> trades{{5, 1}, {7, 1}, {12, 1}, {15, -1}, {3, -1}, {4, -1}, {1, -1}};
	const auto h = spin_histograms(trades, 10);
	EXPECT_EQ(h.plus_counts.at(0), 2u);
	EXPECT_EQ(h.plus_counts.at(10), 1u);
	EXPECT_DOUBLE_EQ(h.plus.at(0), 1.0);
	EXPECT_DOUBLE_EQ(h.plus.at(10), 0.5);
	EXPECT_EQ(h.minus_counts.at(0), 3u);
	EXPECT_DOUBLE_EQ(h.minus.at(10), 1.0 / 3.0);
	std::ostringstream csv;
	write_spin_histogram_csv(csv, h);
	EXPECT_EQ(csv.str(), "interval_bin,h_S_plus,h_S_minus\n0,1,1\n10,0.5,0.3333333333\n");
	EXPECT_THROW(spin_histograms(trades, 0), std::invalid_argument);
}
