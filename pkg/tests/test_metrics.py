import numpy as np
import pytest

from helpers.image_helper import ImageHelper
from helpers.metrics_helper import FEATURE_EXTRACTOR_VERSION, MetricsHelper
from models.errors import DomainError, FitError, ImageError
from models.image import Image
from models.quality import FeatureGaussian, MetricKind


@pytest.fixture
def metricas():
    return MetricsHelper.get_instance()


def _gaussiana_1d(mu, sigma):
    return FeatureGaussian(mean=np.array([mu]), covariance=np.array([[sigma ** 2]]))


def test_normalized_mse_bounds(metricas, small_dataset):
    imagen = small_dataset[0]
    assert metricas.normalized_mse(imagen, imagen) == 0.0
    assert metricas.normalized_mse(imagen, ImageHelper.invert(imagen)) == pytest.approx(1.0)


def test_mse_shape_mismatch(metricas, small_dataset, gray_image):
    with pytest.raises(ImageError):
        metricas.mse(small_dataset[0], gray_image)


def test_dataset_distortion_normalizes_the_average(metricas, small_dataset):
    invertidas = [ImageHelper.invert(i) for i in small_dataset]
    assert metricas.dataset_distortion(small_dataset, invertidas) == pytest.approx(1.0)
    assert metricas.dataset_distortion(small_dataset, small_dataset) == 0.0
    with pytest.raises(ImageError):
        metricas.dataset_distortion(small_dataset, small_dataset[:2])


def test_frechet_of_identical_gaussians_is_zero(metricas):
    generador = np.random.default_rng(0)
    datos = generador.normal(size=(200, 16))
    g = metricas.gaussian_fit(datos)
    assert metricas.frechet_distance(g, g) == pytest.approx(0.0, abs=1e-9)


def test_frechet_one_dimensional_closed_form(metricas):
    generador = np.random.default_rng(1)
    for _ in range(100):
        mu1, mu2 = generador.normal(0, 5, 2)
        s1, s2 = generador.uniform(0.1, 4.0, 2)
        esperado = (mu1 - mu2) ** 2 + (s1 - s2) ** 2
        obtenido = metricas.frechet_distance(_gaussiana_1d(mu1, s1), _gaussiana_1d(mu2, s2))
        assert obtenido == pytest.approx(esperado, abs=1e-9)


def test_frechet_hand_covariance(metricas):
    g1 = FeatureGaussian(mean=np.zeros(2), covariance=np.diag([4.0, 1.0]))
    g2 = FeatureGaussian(mean=np.array([1.0, 0.0]), covariance=np.diag([1.0, 1.0]))
    # 1 + (2 - 1)^2 + (1 - 1)^2
    assert metricas.frechet_distance(g1, g2) == pytest.approx(2.0, abs=1e-12)


def test_frechet_is_symmetric_in_64_dimensions(metricas):
    generador = np.random.default_rng(2)
    g1 = metricas.gaussian_fit(generador.normal(size=(300, 64)))
    g2 = metricas.gaussian_fit(generador.normal(1.0, 2.0, size=(300, 64)))
    assert metricas.frechet_distance(g1, g2) == pytest.approx(metricas.frechet_distance(g2, g1), abs=1e-9)


def test_frechet_dimension_mismatch(metricas):
    with pytest.raises(DomainError):
        metricas.frechet_distance(_gaussiana_1d(0, 1), FeatureGaussian(np.zeros(2), np.eye(2)))


def test_gaussian_fit_needs_two_vectors_and_shrinks_small_sets(metricas):
    with pytest.raises(FitError):
        metricas.gaussian_fit(np.ones((1, 4)))
    g = metricas.gaussian_fit(np.array([[0.0, 0.0, 0.0], [1.0, 1.0, 1.0]]))
    assert np.all(np.linalg.eigvalsh(g.covariance) > 0)


def test_feature_embedding_layout(metricas, small_dataset):
    vector = metricas.feature_embed(small_dataset[0])
    assert vector.shape == (64,)
    assert np.all(np.isfinite(vector))
    assert vector[48:56].sum() == pytest.approx(100.0)
    assert np.all(np.diff(vector[56:64]) >= 0)
    assert FEATURE_EXTRACTOR_VERSION == 'genflow-features/1'


def test_embedding_of_constant_image(metricas):
    vector = metricas.feature_embed(Image(np.full((32, 32, 3), 90, dtype=np.uint8)))
    assert np.allclose(vector[:48], 0.0)
    assert vector[48] == pytest.approx(100.0)
    assert np.allclose(vector[56:], 0.0)


def test_fid_prefers_closer_sets(metricas):
    imagenes = ImageHelper.get_instance()
    reales = imagenes.generate_dataset(24, 32, 32, master_seed=5)
    parecidas = imagenes.generate_dataset(24, 32, 32, master_seed=6)
    planas = [Image(np.full((32, 32, 3), 128, dtype=np.uint8)) for _ in range(24)]
    assert metricas.fid(reales, reales) == pytest.approx(0.0, abs=1e-6)
    assert metricas.fid(reales, parecidas) < metricas.fid(reales, planas)


def test_fid_parallel_matches_serial(metricas, small_dataset):
    otras = ImageHelper.get_instance().generate_dataset(8, 32, 32, master_seed=8)
    assert metricas.fid(small_dataset, otras, jobs=3) == metricas.fid(small_dataset, otras, jobs=1)


def test_normalize_fid(metricas):
    assert metricas.normalize_fid(5.0, 10.0) == 0.5
    assert metricas.normalize_fid(15.0, 10.0) == 1.0
    with pytest.raises(DomainError):
        metricas.normalize_fid(1.0, 0.0)


def test_metric_kind_parse():
    assert MetricKind.parse('Perception') is MetricKind.PERCEPTION
    with pytest.raises(DomainError):
        MetricKind.parse('psnr')


def test_mse_of_black_against_white(metricas):
    negro = Image(np.zeros((8, 8), dtype=np.uint8))
    blanco = Image(np.full((8, 8), 255, dtype=np.uint8))
    assert metricas.mse(negro, blanco) == 65025.0


def test_mse_matches_double_loop(metricas):
    generador = np.random.default_rng(4)
    for _ in range(5):
        a = generador.integers(0, 256, size=(12, 16, 3), dtype=np.uint8)
        b = generador.integers(0, 256, size=(12, 16, 3), dtype=np.uint8)
        total = 0.0
        for fila in range(a.shape[0]):
            for columna in range(a.shape[1]):
                for canal in range(a.shape[2]):
                    diferencia = float(a[fila, columna, canal]) - float(b[fila, columna, canal])
                    total += diferencia * diferencia
        assert metricas.mse(Image(a), Image(b)) == pytest.approx(total / a.size, abs=1e-9)


def test_half_inverted_constant_image_scores_one_half(metricas):
    original = Image(np.full((16, 16, 3), 64, dtype=np.uint8))
    mezcla = original.pixels.copy()
    mezcla.reshape(-1, 3)[::2] = 255 - 64
    assert metricas.normalized_mse(original, Image(mezcla)) == 0.5


def test_grid_features_ignore_brightness_shift(metricas):
    pixeles = np.random.default_rng(8).integers(0, 200, size=(64, 64, 3))
    base = metricas.feature_embed(Image(pixeles.astype(np.uint8)))
    desplazada = metricas.feature_embed(Image((pixeles + 10).astype(np.uint8)))
    assert np.allclose(base[:48], desplazada[:48], rtol=0.0, atol=1e-9)


def test_gaussian_fit_hand_example(metricas):
    g = metricas.gaussian_fit(np.array([[0.0, 0.0], [2.0, 0.0], [0.0, 2.0], [2.0, 2.0]]))
    assert np.allclose(g.mean, [1.0, 1.0])
    assert np.allclose(g.covariance, (4.0 / 3.0) * np.eye(2), rtol=0.0, atol=1e-12)


def test_feature_gaussian_rejects_asymmetric_covariance():
    with pytest.raises(DomainError, match="simétrica"):
        FeatureGaussian(mean=np.zeros(2), covariance=np.array([[1.0, 0.5], [0.0, 1.0]]))
    FeatureGaussian(mean=np.zeros(2), covariance=np.array([[1.0, 0.5], [0.5 + 1e-12, 1.0]]))


def test_block_statistics_are_variances(metricas):
    pixeles = np.zeros((64, 64), dtype=np.uint8)
    pixeles[:8, :8] = np.tile([0, 20], 32).reshape(8, 8)
    vector = metricas.feature_embed(Image(pixeles))
    # un solo bloque con dos niveles: varianza 10^2
    assert vector[63] == pytest.approx(100.0)
    assert vector[56] == 0.0
