import warnings

# numba's TBB probe warns on this image (old TBB); the fallback layer is fine
warnings.filterwarnings("ignore", message=".*TBB.*")
