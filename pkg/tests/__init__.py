# orf-spectral Test Suite
