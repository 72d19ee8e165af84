# urls.py
from django.urls import path

from .views import DmtEvalView, DmtSweepView, HealthView, PresetListView

urlpatterns = [
    # Health check
    path('health/', HealthView.as_view(), name='health'),

    # Reference data
    path('presets/', PresetListView.as_view(), name='presets'),

    # Closed forms
    path('dmt/eval/', DmtEvalView.as_view(), name='dmt-eval'),
    path('dmt/sweep/', DmtSweepView.as_view(), name='dmt-sweep'),
]
