# armkit package
