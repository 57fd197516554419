"""Services package for hyperswitch: generators, coupling, switchings, oracles and statistics."""
